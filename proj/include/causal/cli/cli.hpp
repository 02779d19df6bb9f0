#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "causal/core/state.hpp"
#include "causal/engine/model.hpp"
#include "causal/interp/interpreter.hpp"

namespace causal::cli {

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::string label;
  std::size_t count = 0;
  double frequency = 0.0;
};

struct Histogram {
  std::string observable;
  std::size_t trials = 0;
  std::vector<HistogramBin> bins;
  std::vector<double> samples;  // observable value per trial, trial order
};

// Runs `trials` independent runs; trial i uses seed deriveSeed(seed, i) and
// stops at halt or after cfg.maxSteps steps. The observable is evaluated on
// the final state. With bins == 0 and an integral observable every integer
// between the extremes gets its own bin (the field's declared interval when
// the observable names an int field); otherwise `bins` (64 when 0) equal
// bins span [min, max].
// Errors: UnknownObservable, EvalError when a trial ends in an engine error.
Histogram histogram(const CausalModel& model, const SystemState& init, const std::string& observable,
                    std::size_t trials, std::uint64_t seed, std::size_t bins, const interp::RunConfig& cfg);

// Entry point of the `causal` tool. args excludes the program name.
// Exit codes: 0 success, 1 model errors, 2 usage errors.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal::cli
