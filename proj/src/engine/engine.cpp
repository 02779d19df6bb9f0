#include "causal/engine/engine.hpp"

#include "causal/engine/evaluator.hpp"

namespace causal {

std::string toString(SelectionMode mode) { return mode == SelectionMode::Strict ? "strict" : "first-match"; }

namespace {

std::string joinNames(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

std::string subjectOf(const SystemState& s) {
  const auto& fields = s.schema()->fields;
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ", ";
    out += fields[i].first + "=" + render(s.value(i));
  }
  return out;
}

}  // namespace

LawSelectionError::LawSelectionError(NoApplicableLaw gap)
    : Error(ErrorKind::NoApplicableLaw, "no law applies to state {" + subjectOf(gap.witness) + "}"),
      witness_(std::move(gap.witness)) {}

LawSelectionError::LawSelectionError(MultipleApplicable overlap)
    : Error(ErrorKind::MultipleApplicable,
            "laws " + joinNames(overlap.laws) + " all apply to state {" + subjectOf(overlap.witness) + "}",
            joinNames(overlap.laws)),
      witness_(std::move(overlap.witness)),
      laws_(std::move(overlap.laws)) {}

bool evalGuard(const CausalModel& model, const Law& law, const SystemState& s, double dt) {
  EvalEnv env;
  env.schema = model.schema.get();
  env.s0 = &s;
  env.dt = dt;
  env.law = law.name;
  return evaluateBool(*law.guard, env);
}

Selection selectLaw(const CausalModel& model, const SystemState& s, SelectionMode mode, double dt) {
  std::vector<const Law*> hits;
  for (const auto& law : model.laws) {
    if (!evalGuard(model, law, s, dt)) continue;
    if (mode == SelectionMode::FirstMatch) return &law;
    hits.push_back(&law);
  }
  if (hits.empty()) return NoApplicableLaw{s};
  if (hits.size() == 1) return hits.front();
  MultipleApplicable overlap{{}, s};
  for (const Law* law : hits) overlap.laws.push_back(law->name);
  return overlap;
}

SystemState applyLaw(const CausalModel& model, const Law& law, const SystemState& s0, double dt,
                     RandomSource& random) {
  EvalEnv env;
  env.schema = model.schema.get();
  env.s0 = &s0;
  env.dt = dt;
  env.random = &random;
  env.law = law.name;
  SystemState s1 = s0;
  execute(law.transition, env, s1);
  return s1;
}

SystemState applyLaw(const CausalModel& model, const Law& law, const SystemState& s0, double dt, RngStream& rng) {
  StreamRandomSource source(rng);
  return applyLaw(model, law, s0, dt, source);
}

SystemState step(const CausalModel& model, const SystemState& s0, double dt, RandomSource& random,
                 SelectionMode mode) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  Selection sel = selectLaw(model, s0, mode, dt);
  if (auto* gap = std::get_if<NoApplicableLaw>(&sel)) throw LawSelectionError(std::move(*gap));
  if (auto* overlap = std::get_if<MultipleApplicable>(&sel)) throw LawSelectionError(std::move(*overlap));
  SystemState s1 = applyLaw(model, *std::get<const Law*>(sel), s0, dt, random);
  s1.setTime(s0.time() + dt);
  return s1;
}

SystemState step(const CausalModel& model, const SystemState& s0, double dt, RngStream& rng, SelectionMode mode) {
  StreamRandomSource source(rng);
  return step(model, s0, dt, source, mode);
}

DeterminismVerdict classifyDeterminism(const CausalModel& model) {
  DeterminismVerdict v;
  for (const auto& law : model.laws) {
    if (law.usesRandom) v.laws.push_back(law.name);
  }
  v.deterministic = v.laws.empty();
  return v;
}

SystemState initialState(const CausalModel& model, RngStream& rng) {
  if (model.presetInit) return *model.presetInit;
  const auto& schema = *model.schema;
  std::vector<Value> zeros;
  zeros.reserve(schema.fields.size());
  for (const auto& [name, type] : schema.fields) zeros.push_back(zeroValue(type, schema.records));
  const SystemState zero(model.schema, 0.0, std::move(zeros));
  std::map<std::string, Value> assignments;
  if (model.initBlock) {
    SystemState s1 = zero;
    std::vector<bool> written(schema.fields.size(), false);
    EvalEnv env;
    env.schema = &schema;
    env.s0 = &zero;
    env.dt = model.defaultTimestep;
    StreamRandomSource source(rng);
    env.random = &source;
    env.law = "init";
    execute(*model.initBlock, env, s1, &written);
    for (std::size_t i = 0; i < written.size(); ++i) {
      if (written[i]) assignments.emplace(schema.fields[i].first, s1.value(i));
    }
  }
  return makeInitialState(model.schema, assignments);
}

bool evalHalt(const CausalModel& model, const SystemState& s, double dt) {
  if (!model.halt) return false;
  EvalEnv env;
  env.schema = model.schema.get();
  env.s0 = &s;
  env.dt = dt;
  env.law = "halt";
  return evaluateBool(*model.halt, env);
}

}  // namespace causal
