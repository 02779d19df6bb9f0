#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causal/core/types.hpp"
#include "causal/core/value.hpp"

namespace causal::quantum {

struct CaParticle {
  std::int64_t id = 0;
  std::int64_t cell = 0;
  std::int64_t v = 0;  // cells per step
  std::int64_t species = 0;
  bool operator==(const CaParticle&) const = default;
};

// Periodic one-dimensional cellular world: a real field value per cell plus
// the particles occupying the cells.
struct CaWorld {
  std::vector<double> phi;
  std::vector<CaParticle> particles;
  bool operator==(const CaWorld&) const = default;
};

// One update: phi += alpha * (phi[j-1] - 2 phi[j] + phi[j+1]); every particle
// moves by its velocity (mod the cell count); particles sharing a cell after
// the move rotate their velocities one place (an exchange for two), in list
// order. Errors: InvalidArgument for an empty grid or a particle off the grid.
CaWorld caStep(const CaWorld& world, double alpha = 0.2);

std::int64_t totalMomentum(const CaWorld& world);

// Conversion to and from the `World { phi: vector(n); particles:
// list(CaParticle); }` record layout used by CML models.
CaWorld caWorldFromValue(const Value& v);
Value caWorldToValue(const CaWorld& world, const Value& like);

// Record declarations and CML source text of the layout above.
std::string caRecordSource(std::size_t cells);

}  // namespace causal::quantum
