#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "causal/core/json.hpp"
#include "causal/core/state.hpp"
#include "causal/engine/engine.hpp"
#include "causal/engine/model.hpp"

namespace causal::interp {

struct RunConfig {
  double dt = 1.0;
  std::size_t maxSteps = 1000;
  std::uint64_t seed = 0;
  SelectionMode mode = SelectionMode::Strict;
  std::size_t recordEvery = 1;
  std::vector<std::string> observables;  // CML expressions
  bool snapshots = false;                // keep the full state in every row

  // Errors: InvalidArgument.
  void validate() const;
};

enum class Termination { Halted, MaxSteps, NoApplicableLaw, MultipleApplicable, EvalError, DepthBound, Pruned };

std::string toString(Termination t);

struct TerminationReason {
  Termination kind = Termination::MaxSteps;
  std::string message;
  std::optional<SystemState> witness;
  std::vector<std::string> laws;
};

struct TraceRow {
  std::size_t step = 0;
  double time = 0.0;
  std::vector<Value> values;
  std::optional<SystemState> snapshot;
};

struct Trace {
  std::string modelName;
  RunConfig config;
  std::vector<std::string> observableNames;
  std::vector<TraceRow> rows;
  TerminationReason termination;
  std::size_t steps = 0;
  std::optional<SystemState> finalState;
};

// Uniform-step evolution: halt check, step bound, then one step. Row 0 is the
// initial state; a row is kept every `recordEvery` steps. The time of step k
// is init.time + k * dt. Engine failures end the run and land in
// `termination`. Errors: InvalidArgument for a bad config, UnknownObservable,
// SchemaMismatch when `init` does not fit the model.
Trace run(const CausalModel& model, const SystemState& init, const RunConfig& cfg);

enum class TraceFormat { Csv, Jsonl };

// Returns the number of bytes written. Errors: SinkError.
std::size_t writeTrace(const Trace& trace, TraceFormat format, std::ostream& out);

Json toJson(const TerminationReason& reason);
Json configJson(const RunConfig& cfg);

// Observable cell text: %.17g for reals, integers verbatim, true/false.
std::string formatCell(const Value& v);

}  // namespace causal::interp
