#include "causal/cml/frontend.hpp"

#include <algorithm>

#include "causal/cml/parser.hpp"
#include "causal/cml/printer.hpp"
#include "causal/engine/evaluator.hpp"

namespace causal::cml {

namespace {

void verifyIntrinsics(const Expr& e, const IntrinsicRegistry& registry) {
  if (e.kind == ExprKind::Call && !registry.find(e.text)) {
    throw Error(ErrorKind::UnknownIntrinsic, "unknown intrinsic '" + e.text + "'", e.text);
  }
  for (const auto& a : e.args) {
    if (a) verifyIntrinsics(*a, registry);
  }
  for (const auto& a : e.rangeItems) verifyIntrinsics(*a, registry);
  for (const auto& a : e.distArgs) verifyIntrinsics(*a, registry);
}

void verifyIntrinsics(const Block& block, const IntrinsicRegistry& registry) {
  for (const auto& s : block) {
    if (s->target) verifyIntrinsics(*s->target, registry);
    if (s->value) verifyIntrinsics(*s->value, registry);
    verifyIntrinsics(s->body, registry);
    verifyIntrinsics(s->elseBody, registry);
  }
}

}  // namespace

ModelPtr lower(const TypedModel& typed) {
  const ModelAst& ast = *typed.ast;
  const IntrinsicRegistry& registry = *typed.registry;
  auto model = std::make_shared<CausalModel>();
  model->name = ast.name;
  model->schema = typed.schema;
  model->registry = typed.registry;
  model->defaultTimestep = ast.timestep.value_or(1.0);
  if (ast.init) {
    verifyIntrinsics(*ast.init, registry);
    model->initBlock = *ast.init;
  }
  if (ast.halt) verifyIntrinsics(*ast.halt, registry);
  if (ast.outcome) {
    verifyIntrinsics(*ast.outcome, registry);
    model->outcomeText = prettyPrint(*ast.outcome);
  }
  model->halt = ast.halt;
  model->outcome = ast.outcome;
  for (const auto& decl : ast.laws) {
    verifyIntrinsics(*decl.guard, registry);
    verifyIntrinsics(decl.body, registry);
    Law law;
    law.name = decl.name;
    law.loc = decl.loc;
    law.guard = decl.guard;
    law.transition = decl.body;
    law.usesRandom = usesRandomness(decl.body);
    law.intrinsics = intrinsicsUsed(decl.body);
    model->laws.push_back(std::move(law));
  }
  model->validate();
  return model;
}

CompileResult compileModel(std::string_view source, const std::map<std::string, std::string>& params,
                           std::shared_ptr<const IntrinsicRegistry> registry) {
  if (!registry) registry = defaultRegistry();
  CompileResult result;
  auto parsed = parse(source);
  result.diagnostics = std::move(parsed.diagnostics);
  if (!parsed.ast) return result;
  for (const auto& [name, text] : params) {
    auto it = std::find_if(parsed.ast->consts.begin(), parsed.ast->consts.end(),
                           [&](const ConstDecl& d) { return d.name == name; });
    if (it == parsed.ast->consts.end()) {
      throw Error(ErrorKind::BadParam, "model '" + parsed.ast->name + "' has no constant '" + name + "'", name);
    }
    auto expr = parseExpression(text);
    if (!expr.expr) {
      throw Error(ErrorKind::BadParam, "value of '" + name + "' is not an expression: " + text, name);
    }
    it->value = expr.expr;
  }
  auto typed = typecheck(parsed.ast, registry);
  result.diagnostics.insert(result.diagnostics.end(), typed.diagnostics.begin(), typed.diagnostics.end());
  if (!typed.model) return result;
  result.model = lower(*typed.model);
  return result;
}

Observable compileObservable(const CausalModel& model, std::string_view text) {
  auto parsed = parseExpression(text);
  if (!parsed.expr) {
    throw Error(ErrorKind::UnknownObservable,
                "observable '" + std::string(text) + "': " + parsed.diagnostics.front().message, std::string(text));
  }
  auto diags = typecheckObservable(*parsed.expr, *model.schema, *model.registry);
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::Error) {
      throw Error(ErrorKind::UnknownObservable, "observable '" + std::string(text) + "': " + d.message,
                  std::string(text));
    }
  }
  return Observable{std::string(text), parsed.expr};
}

Value evalObservable(const CausalModel& model, const Observable& obs, const SystemState& s, double dt) {
  EvalEnv env;
  env.schema = model.schema.get();
  env.s0 = &s;
  env.dt = dt;
  env.law = "observable " + obs.name;
  return evaluate(*obs.expr, env);
}

}  // namespace causal::cml
