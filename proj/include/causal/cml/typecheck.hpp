#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "causal/cml/ast.hpp"
#include "causal/cml/diagnostic.hpp"
#include "causal/core/schema.hpp"
#include "causal/engine/intrinsic.hpp"

namespace causal::cml {

// An AST whose expressions carry types and resolved symbols, plus the schema
// (records, fields, evaluated constants) it was checked against.
struct TypedModel {
  std::shared_ptr<ModelAst> ast;
  SchemaPtr schema;
  std::shared_ptr<const IntrinsicRegistry> registry;
};

struct TypecheckResult {
  std::optional<TypedModel> model;  // empty when diagnostics contain an error
  std::vector<Diagnostic> diagnostics;
};

// Annotates `ast` in place. Diagnostic codes: UnknownName, UnknownType,
// UnknownMember, UnknownIntrinsic, UnknownDistribution, TypeMismatch,
// RandomInGuard, RandomNotAllowed, AssignToConstant, NotAssignable,
// DuplicateName, ReservedName, CyclicRecord, InvalidType, ArityMismatch,
// MissingMember, ConstEvalError, NoLaws, BadTimestep.
TypecheckResult typecheck(std::shared_ptr<ModelAst> ast, std::shared_ptr<const IntrinsicRegistry> registry);

// Checks a standalone read-only expression (observable, outcome) against a
// schema: fields, constants, `time` and `dt` are visible; `random` and
// stochastic intrinsics are rejected.
std::vector<Diagnostic> typecheckObservable(Expr& e, const StateSchema& schema, const IntrinsicRegistry& registry);

// True when `e` contains `random` or a stochastic intrinsic call.
bool usesRandomness(const Expr& e);
bool usesRandomness(const Block& block);

// Names of intrinsics called anywhere in `block`, in first-use order.
std::vector<std::string> intrinsicsUsed(const Block& block);

// Folds `e` to a constant when it reads no fields, locals, `time` or `dt`.
std::optional<Value> foldConstant(const Expr& e, const StateSchema& schema);

}  // namespace causal::cml
