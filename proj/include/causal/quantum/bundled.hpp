#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causal/core/state.hpp"
#include "causal/core/value.hpp"
#include "causal/engine/model.hpp"

namespace causal::quantum {

struct BundledModel {
  ModelPtr model;
  SystemState init;
};

// counter, harmonic_oscillator, free_particle, schrodinger_1d (CML sources)
// and double_slit, entangled_pair, qftca_toy (built natively).
std::vector<std::string> bundledModelNames();

// Errors: UnknownModel(name); BadParam(key) for unknown keys or bad values.
BundledModel buildBundledModel(const std::string& name, const std::map<std::string, std::string>& params = {});

// CML text of a bundled model after parameter substitution.
std::string bundledSource(const std::string& name, const std::map<std::string, std::string>& params = {});

// One-line description shown by list-models.
std::string bundledSummary(const std::string& name);

struct DoubleSlitGeometry {
  double slitSeparation = 5.0;
  double screenDistance = 100.0;
  double k = 6.283185307179586;
  std::size_t bins = 64;
  double screenHalfWidth = 64.0;
};

// Bin edges -W, -W + 2W/B, ..., W.
std::vector<double> screenEdges(const DoubleSlitGeometry& g);

// One path per (slit, screen bin): starts at slit height y_s = ±d/2, moves
// to the bin centre in one unit of time, amplitude exp(i k r) / sqrt(2 B)
// with r the slit-to-bin distance.
PwCollection doubleSlitPaths(const DoubleSlitGeometry& g);

// Entangled spin pair: paths (+1, -1) and (-1, +1) with equal amplitudes.
PwCollection entangledSpinPair();

}  // namespace causal::quantum
