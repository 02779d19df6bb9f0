#pragma once

#include "causal/engine/intrinsic.hpp"

namespace causal::quantum {

// schrodinger_step, gaussian_packet, grid_norm, grid_mean, grid_variance,
// classical_step, pw_propagate, pw_interact, pw_detect, ca_step.
void registerQuantumIntrinsics(IntrinsicRegistry& registry);

}  // namespace causal::quantum
