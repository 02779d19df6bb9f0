#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causal/cml/ast.hpp"
#include "causal/core/state.hpp"
#include "causal/engine/random.hpp"
#include "causal/error.hpp"

namespace causal {

// Runtime failure inside an expression or statement, located in source.
class EvalError : public Error {
 public:
  EvalError(std::string message, SourceLoc loc, std::string law);
  SourceLoc loc() const { return loc_; }
  const std::string& law() const { return law_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceLoc loc_;
  std::string law_;
  std::string detail_;
};

// Position inside a state: a field followed by record-member / element steps.
struct WritePath {
  std::size_t field = 0;
  struct Step {
    bool member = false;
    std::size_t index = 0;
  };
  std::vector<Step> steps;
};

struct LocalBinding {
  Value value;
  std::optional<WritePath> write;
};

// Everything expressions may read. All field reads see `s0`; writes go to a
// separate post-state, which gives simultaneous-update semantics.
struct EvalEnv {
  const StateSchema* schema = nullptr;
  const SystemState* s0 = nullptr;  // null while folding constants
  double dt = 0.0;
  RandomSource* random = nullptr;   // null for guards, halt and observables
  std::string law;
  std::vector<LocalBinding> locals;
};

Value evaluate(const cml::Expr& e, EvalEnv& env);
bool evaluateBool(const cml::Expr& e, EvalEnv& env);

// Runs `block` reading env.s0 and writing `s1`. When `written` is given,
// marks every field the block assigns.
void execute(const cml::Block& block, EvalEnv& env, SystemState& s1, std::vector<bool>* written = nullptr);

// Converts `v` to `target` (int -> real -> complex widening, numeric lists
// to vectors, element-wise for lists and records). Throws Error(TypeMismatch).
Value coerce(const Value& v, const TypeDesc& target, const std::map<std::string, RecordDecl>& records);

}  // namespace causal
