#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "causal/cml/diagnostic.hpp"
#include "causal/cml/typecheck.hpp"
#include "causal/engine/model.hpp"

namespace causal::cml {

// Builds the executable model. Laws keep declaration order; usesRandom is a
// syntactic scan that also counts stochastic intrinsics.
// Errors: UnknownIntrinsic(name) when a call is missing from the registry.
ModelPtr lower(const TypedModel& typed);

struct CompileResult {
  ModelPtr model;  // null when diagnostics contain an error
  std::vector<Diagnostic> diagnostics;
};

// parse + typecheck + lower. `params` replace constant initializers with the
// given expression text. Errors: BadParam for unknown or malformed params.
CompileResult compileModel(std::string_view source, const std::map<std::string, std::string>& params = {},
                           std::shared_ptr<const IntrinsicRegistry> registry = nullptr);

// A named read-only expression evaluated against states of one model.
struct Observable {
  std::string name;
  ExprPtr expr;
};

// Errors: UnknownObservable with the diagnostic text when `text` does not
// parse or typecheck against the model.
Observable compileObservable(const CausalModel& model, std::string_view text);

Value evalObservable(const CausalModel& model, const Observable& obs, const SystemState& s, double dt);

}  // namespace causal::cml
