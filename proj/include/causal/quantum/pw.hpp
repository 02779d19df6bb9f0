#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "causal/core/value.hpp"
#include "causal/engine/random.hpp"

namespace causal::quantum {

// Advances every particle's `position` by `velocity * dt` on every path.
// With `phase`, amplitudes pick up exp(i omega dt) from the path's first
// particle `omega` attribute. Errors: MissingAttribute.
PwCollection pwPropagate(const PwCollection& pw, double dt, bool phase = false);

// Born weights |a_i|^2 / sum |a_j|^2 of the paths. Errors: ZeroNorm.
std::vector<double> pathProbabilities(const PwCollection& pw);

struct Collapse {
  std::size_t path = 0;
  PwCollection collapsed;  // the selected path alone, amplitude of modulus 1
};

// Realizes an interaction: one path is drawn with PSI(amplitudes) and all
// others are discarded. Errors: ZeroNorm.
Collapse pwInteract(const PwCollection& pw, RandomSource& random);
Collapse pwInteract(const PwCollection& pw, RngStream& rng);

enum class DetectMode { Coherent, Marked };

// Bin i covers [edges[i], edges[i+1]); the last bin also contains its upper
// edge. Coherent: p_i ∝ |sum of amplitudes landing in bin i|^2. Marked:
// p_i ∝ sum of |amplitude|^2. Uses the first particle's `position`.
// Errors: MissingAttribute, PositionOutOfBins, ZeroNorm, InvalidArgument.
std::vector<double> detectProbabilities(const PwCollection& pw, std::span<const double> edges, DetectMode mode);

std::size_t pwDetect(const PwCollection& pw, std::span<const double> edges, DetectMode mode, RandomSource& random);
std::size_t pwDetect(const PwCollection& pw, std::span<const double> edges, DetectMode mode, RngStream& rng);

}  // namespace causal::quantum
