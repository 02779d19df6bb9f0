#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "causal/cml/ast.hpp"
#include "causal/core/state.hpp"
#include "causal/engine/intrinsic.hpp"

namespace causal {

// IF guard(s0) THEN s1 = transition(s0).
struct Law {
  std::string name;
  SourceLoc loc;
  cml::ExprPtr guard;
  cml::Block transition;
  bool usesRandom = false;
  std::vector<std::string> intrinsics;  // intrinsic names called by the transition
};

struct CausalModel {
  std::string name;
  SchemaPtr schema;
  std::vector<Law> laws;
  std::optional<cml::Block> initBlock;
  std::optional<SystemState> presetInit;  // natively built initial state
  cml::ExprPtr halt;
  cml::ExprPtr outcome;
  std::string outcomeText;
  double defaultTimestep = 1.0;
  std::shared_ptr<const IntrinsicRegistry> registry;

  const Law* findLaw(const std::string& lawName) const;
  // Throws Error(InvalidArgument) when the model breaks its invariants.
  void validate() const;
};

using ModelPtr = std::shared_ptr<const CausalModel>;

}  // namespace causal
