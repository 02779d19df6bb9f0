#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causal/core/types.hpp"
#include "causal/core/value.hpp"
#include "causal/engine/random.hpp"

namespace causal {

using RealFn = std::function<double(double)>;

struct IntrinsicContext {
  double dt = 0.0;
  RandomSource* random = nullptr;  // null outside transition blocks
  std::string_view law;
};

// A function callable from CML expressions. Builtins are the scalar/grid
// helpers of the language; quantum intrinsics are the engine-provided
// refinements (Schrödinger stepping, pw collections, cellular automaton).
struct Intrinsic {
  enum class Category { Builtin, Quantum };

  std::string name;
  Category category = Category::Builtin;
  bool stochastic = false;
  std::size_t minArgs = 0;
  std::size_t maxArgs = 0;
  // Argument positions that take a `param -> expr` real function.
  std::vector<std::size_t> lambdaArgs;

  // Result type for the given argument types, or nullopt with `why` set.
  // Lambda positions are passed as `real`.
  std::function<std::optional<TypeDesc>(std::span<const TypeDesc> args,
                                        const std::map<std::string, RecordDecl>& records, std::string& why)>
      result;

  std::function<Value(std::span<const Value> args, std::span<const RealFn> fns, IntrinsicContext& ctx)> eval;

  bool takesLambda(std::size_t position) const;
};

class IntrinsicRegistry {
 public:
  void add(Intrinsic fn);
  const Intrinsic* find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Intrinsic, std::less<>> entries_;
};

// Core expression builtins: abs, abs2, re, im, conj, exp, cos, sin, sqrt,
// complex, sum, len, laplacian.
void registerBuiltins(IntrinsicRegistry& registry);

// Builtins plus the quantum-kit intrinsics. Lives as long as the program.
std::shared_ptr<const IntrinsicRegistry> defaultRegistry();

}  // namespace causal
