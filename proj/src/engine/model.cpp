#include "causal/engine/model.hpp"

#include <cmath>
#include <set>

#include "causal/error.hpp"

namespace causal {

const Law* CausalModel::findLaw(const std::string& lawName) const {
  for (const auto& law : laws) {
    if (law.name == lawName) return &law;
  }
  return nullptr;
}

void CausalModel::validate() const {
  if (!schema) throw Error(ErrorKind::InvalidArgument, "model '" + name + "' has no schema", name);
  if (laws.empty()) throw Error(ErrorKind::InvalidArgument, "model '" + name + "' has no laws", name);
  std::set<std::string> seen;
  for (const auto& law : laws) {
    if (!seen.insert(law.name).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate law name '" + law.name + "'", law.name);
    }
    if (!law.guard) throw Error(ErrorKind::InvalidArgument, "law '" + law.name + "' has no guard", law.name);
  }
  if (!(defaultTimestep > 0.0) || !std::isfinite(defaultTimestep)) {
    throw Error(ErrorKind::InvalidArgument, "timestep must be positive", name);
  }
  if (presetInit && !presetInit->schema()->sameLayout(*schema)) {
    throw Error(ErrorKind::SchemaMismatch, "preset initial state does not match the model schema", name);
  }
}

}  // namespace causal
