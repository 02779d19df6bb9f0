#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "causal/core/json.hpp"
#include "causal/interp/interpreter.hpp"

namespace causal::interp {

// One segment of a lineage. The root starts at the initial state; every
// other node starts right after its parent's fork with `outcome` chosen.
// `state` is where the segment ended: the pre-step state of the next fork,
// or the final state of a leaf.
struct WorldNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::string outcome;           // label of the value drawn at the parent's fork
  std::size_t outcomeIndex = 0;  // position of that value in the draw's range
  double probability = 1.0;      // of that outcome at the parent's fork
  double weight = 1.0;           // product of probabilities along the lineage
  std::size_t draws = 0;         // random draws fixed along the lineage
  std::size_t step = 0;          // step index where the segment ended
  std::string law;               // law whose draw forks this node
  SystemState state;
  std::vector<std::size_t> children;
  std::optional<TerminationReason> termination;  // leaves only
};

struct WorldTree {
  std::vector<WorldNode> nodes;  // nodes[0] is the root
  double prunedMass = 0.0;
  std::size_t depthBound = 0;
  std::size_t widthBound = 0;

  std::vector<std::size_t> leaves() const;  // unpruned leaves
  double leafWeight() const;
};

// Many-worlds execution: every categorical draw forks one child per
// outcome of positive probability. A lineage that needs more than
// `depthBound` draws ends as a DepthBound leaf. When more than `widthBound`
// lineages are live, the lightest (stable order: weight desc, creation
// order) are cut and their mass added to prunedMass.
// Errors: ContinuousRandomNotBranchable(law), InvalidArgument.
WorldTree branchRun(const CausalModel& model, const SystemState& init, const RunConfig& cfg, std::size_t depthBound,
                    std::size_t widthBound);

Json toJson(const WorldTree& tree, bool includeStates = true);

}  // namespace causal::interp
