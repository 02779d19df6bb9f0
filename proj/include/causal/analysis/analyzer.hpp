#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causal/core/json.hpp"
#include "causal/core/state.hpp"
#include "causal/engine/engine.hpp"
#include "causal/engine/model.hpp"

namespace causal::analysis {

struct CheckStrategy {
  enum class Kind { Enumerate, Sample, Trace };
  Kind kind = Kind::Sample;
  std::size_t samples = 1000;           // sample
  std::size_t runs = 10;                // trace
  std::size_t stepsPerRun = 100;        // trace
  std::uint64_t seed = 0;
  std::size_t enumerationLimit = 1'000'000;

  static CheckStrategy enumerate();
  static CheckStrategy sample(std::size_t count, std::uint64_t seed);
  static CheckStrategy trace(std::size_t runs, std::size_t stepsPerRun, std::uint64_t seed);
};

std::string toString(CheckStrategy::Kind k);

// Where a witness came from: sample i of `seed` (its state is sampleState
// on RngStream(deriveSeed(seed, i))), enumeration index i, or run i step k.
struct WitnessOrigin {
  CheckStrategy::Kind strategy = CheckStrategy::Kind::Sample;
  std::uint64_t seed = 0;
  std::size_t index = 0;
  std::size_t step = 0;
};

struct ConsistencyVerdict {
  enum class Kind { Pass, Fail, Error };
  Kind kind = Kind::Pass;
  std::size_t statesChecked = 0;
  std::optional<SystemState> witness;
  std::vector<std::string> laws;
  std::optional<WitnessOrigin> origin;
  std::string error;
};

struct CompletenessVerdict {
  enum class Kind { PassBounded, PassTrivially, Fail, Error };
  Kind kind = Kind::PassBounded;
  std::size_t statesChecked = 0;
  std::optional<SystemState> witness;  // out-state no guard accepts
  std::optional<SystemState> inState;  // its pre-state
  std::string law;                     // law that produced the witness
  std::optional<WitnessOrigin> origin;
  std::string error;
};

struct ComputabilityNotes {
  std::vector<std::string> unsampleableFields;
  std::vector<std::string> intrinsics;
  std::vector<std::string> notes;
};

struct AnalysisReport {
  std::string modelName;
  CheckStrategy requested;
  CheckStrategy used;
  std::vector<std::string> downgrades;
  ConsistencyVerdict consistency;
  CompletenessVerdict completeness;
  DeterminismVerdict determinism;
  ComputabilityNotes computability;
  std::string realityConformance = "NotMachineCheckable";
};

// Disjunction of all guards.
bool validstate(const CausalModel& model, const SystemState& s);

// True when some guard folds to the constant `true`.
bool guardsTriviallyTrue(const CausalModel& model);

// Errors: UnsampleableField; InvalidArgument for an oversized enumeration.
ConsistencyVerdict checkConsistency(const CausalModel& model, const CheckStrategy& strategy);

// Out-states where the halt condition holds end their lineage and are not
// required to be valid in-states. Errors: UnsampleableField,
// NoValidInStateFound.
CompletenessVerdict checkCompleteness(const CausalModel& model, const CheckStrategy& strategy);

// Never throws for model-level problems; they are recorded in the report.
AnalysisReport analyze(const CausalModel& model, const CheckStrategy& strategy);

Json toJson(const AnalysisReport& report);

}  // namespace causal::analysis
