#include "causal/analysis/analyzer.hpp"

#include <functional>

#include "causal/cml/typecheck.hpp"
#include "causal/engine/evaluator.hpp"

namespace causal::analysis {

CheckStrategy CheckStrategy::enumerate() {
  CheckStrategy s;
  s.kind = Kind::Enumerate;
  return s;
}

CheckStrategy CheckStrategy::sample(std::size_t count, std::uint64_t seed) {
  CheckStrategy s;
  s.kind = Kind::Sample;
  s.samples = count;
  s.seed = seed;
  return s;
}

CheckStrategy CheckStrategy::trace(std::size_t runs, std::size_t stepsPerRun, std::uint64_t seed) {
  CheckStrategy s;
  s.kind = Kind::Trace;
  s.runs = runs;
  s.stepsPerRun = stepsPerRun;
  s.seed = seed;
  return s;
}

std::string toString(CheckStrategy::Kind k) {
  switch (k) {
    case CheckStrategy::Kind::Enumerate: return "enumerate";
    case CheckStrategy::Kind::Sample: return "sample";
    case CheckStrategy::Kind::Trace: return "trace";
  }
  return "";
}

namespace {

constexpr std::size_t kStartAttempts = 1000;

double dtOf(const CausalModel& model) { return model.defaultTimestep; }

std::vector<std::string> applicable(const CausalModel& model, const SystemState& s) {
  std::vector<std::string> names;
  for (const auto& law : model.laws) {
    if (evalGuard(model, law, s, dtOf(model))) names.push_back(law.name);
  }
  return names;
}

// Visits the in-states of an enumerate or sample strategy. The callback
// gets the state, its origin and the stream that produced it (transition
// draws continue on that stream); it returns false to stop.
void forEachState(const CausalModel& model, const CheckStrategy& strategy,
                  const std::function<bool(const SystemState&, const WitnessOrigin&, RngStream&)>& visit) {
  if (strategy.kind == CheckStrategy::Kind::Enumerate) {
    const auto states = enumerateStates(model.schema, strategy.enumerationLimit);
    RngStream rng(strategy.seed);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (!visit(states[i], {strategy.kind, strategy.seed, i, 0}, rng)) return;
    }
    return;
  }
  if (strategy.samples < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
  for (std::size_t i = 0; i < strategy.samples; ++i) {
    RngStream rng(deriveSeed(strategy.seed, i));
    const SystemState s = sampleState(model.schema, rng);
    if (!visit(s, {strategy.kind, strategy.seed, i, 0}, rng)) return;
  }
}

// Starting state of trace run `run`: a sampled valid in-state when the
// schema is sampleable, otherwise the model's initial state.
std::optional<SystemState> traceStart(const CausalModel& model, RngStream& rng) {
  if (!unsampleableFields(*model.schema).empty()) return initialState(model, rng);
  for (std::size_t attempt = 0; attempt < kStartAttempts; ++attempt) {
    SystemState s = sampleState(model.schema, rng);
    if (validstate(model, s) && !evalHalt(model, s, dtOf(model))) return s;
  }
  return std::nullopt;
}

// Walks trace runs in first-match mode. `visit` sees every encountered
// state together with the law that produced it (empty for starts).
void forEachTraceState(
    const CausalModel& model, const CheckStrategy& strategy,
    const std::function<bool(const SystemState& s, const SystemState* pre, const std::string& law,
                             const WitnessOrigin&)>& visit) {
  if (strategy.runs < 1) throw Error(ErrorKind::InvalidArgument, "run count must be at least 1");
  const double dt = dtOf(model);
  for (std::size_t r = 0; r < strategy.runs; ++r) {
    RngStream rng(deriveSeed(strategy.seed, r));
    auto start = traceStart(model, rng);
    if (!start) continue;
    SystemState s = *start;
    if (!visit(s, nullptr, "", {CheckStrategy::Kind::Trace, strategy.seed, r, 0})) return;
    for (std::size_t k = 0; k < strategy.stepsPerRun; ++k) {
      if (evalHalt(model, s, dt)) break;
      Selection sel = selectLaw(model, s, SelectionMode::FirstMatch, dt);
      const Law* const* law = std::get_if<const Law*>(&sel);
      if (!law) break;
      SystemState next = applyLaw(model, **law, s, dt, rng);
      next.setTime(s.time() + dt);
      if (!visit(next, &s, (*law)->name, {CheckStrategy::Kind::Trace, strategy.seed, r, k + 1})) return;
      s = std::move(next);
    }
  }
}

}  // namespace

bool validstate(const CausalModel& model, const SystemState& s) {
  for (const auto& law : model.laws) {
    if (evalGuard(model, law, s, dtOf(model))) return true;
  }
  return false;
}

bool guardsTriviallyTrue(const CausalModel& model) {
  for (const auto& law : model.laws) {
    auto v = cml::foldConstant(*law.guard, *model.schema);
    if (v && v->isBool() && v->asBool()) return true;
  }
  return false;
}

ConsistencyVerdict checkConsistency(const CausalModel& model, const CheckStrategy& strategy) {
  ConsistencyVerdict verdict;
  auto check = [&](const SystemState& s, const WitnessOrigin& origin) {
    ++verdict.statesChecked;
    auto hits = applicable(model, s);
    if (hits.size() < 2) return true;
    verdict.kind = ConsistencyVerdict::Kind::Fail;
    verdict.witness = s;
    verdict.laws = std::move(hits);
    verdict.origin = origin;
    return false;
  };
  if (strategy.kind == CheckStrategy::Kind::Trace) {
    forEachTraceState(model, strategy, [&](const SystemState& s, const SystemState*, const std::string&,
                                           const WitnessOrigin& origin) { return check(s, origin); });
  } else {
    forEachState(model, strategy,
                 [&](const SystemState& s, const WitnessOrigin& origin, RngStream&) { return check(s, origin); });
  }
  return verdict;
}

CompletenessVerdict checkCompleteness(const CausalModel& model, const CheckStrategy& strategy) {
  CompletenessVerdict verdict;
  if (guardsTriviallyTrue(model)) {
    verdict.kind = CompletenessVerdict::Kind::PassTrivially;
    return verdict;
  }
  const double dt = dtOf(model);
  std::size_t validInStates = 0;
  auto checkOut = [&](const SystemState& out, const SystemState& in, const std::string& law,
                      const WitnessOrigin& origin) {
    ++verdict.statesChecked;
    if (evalHalt(model, out, dt) || validstate(model, out)) return true;
    verdict.kind = CompletenessVerdict::Kind::Fail;
    verdict.witness = out;
    verdict.inState = in;
    verdict.law = law;
    verdict.origin = origin;
    return false;
  };
  if (strategy.kind == CheckStrategy::Kind::Trace) {
    forEachTraceState(model, strategy,
                      [&](const SystemState& s, const SystemState* pre, const std::string& law,
                          const WitnessOrigin& origin) {
                        if (!pre) {
                          ++validInStates;
                          return true;
                        }
                        return checkOut(s, *pre, law, origin);
                      });
  } else {
    forEachState(model, strategy, [&](const SystemState& s, const WitnessOrigin& origin, RngStream& rng) {
      if (evalHalt(model, s, dt)) return true;
      Selection sel = selectLaw(model, s, SelectionMode::FirstMatch, dt);
      const Law* const* law = std::get_if<const Law*>(&sel);
      if (!law) return true;
      ++validInStates;
      SystemState out = applyLaw(model, **law, s, dt, rng);
      out.setTime(s.time() + dt);
      return checkOut(out, s, (*law)->name, origin);
    });
  }
  if (validInStates == 0) {
    throw Error(ErrorKind::NoValidInStateFound,
                "no " + toString(strategy.kind) + " state satisfied any guard of model '" + model.name + "'",
                model.name);
  }
  return verdict;
}

AnalysisReport analyze(const CausalModel& model, const CheckStrategy& strategy) {
  AnalysisReport report;
  report.modelName = model.name;
  report.requested = strategy;
  report.used = strategy;
  report.computability.unsampleableFields = unsampleableFields(*model.schema);
  report.determinism = classifyDeterminism(model);
  for (const auto& law : model.laws) {
    for (const auto& name : law.intrinsics) {
      auto& list = report.computability.intrinsics;
      if (std::find(list.begin(), list.end(), name) == list.end()) list.push_back(name);
    }
  }
  report.computability.notes.push_back(
      "inventory only: computability of guards and transitions is not decided by this check");

  if (strategy.kind != CheckStrategy::Kind::Trace && !report.computability.unsampleableFields.empty()) {
    std::string fields;
    for (const auto& f : report.computability.unsampleableFields) fields += (fields.empty() ? "" : ", ") + f;
    report.used.kind = CheckStrategy::Kind::Trace;
    report.downgrades.push_back(toString(strategy.kind) + " -> trace: unsampleable fields " + fields);
  } else if (strategy.kind == CheckStrategy::Kind::Enumerate) {
    try {
      enumerateStates(model.schema, strategy.enumerationLimit);
    } catch (const Error& err) {
      report.used.kind = CheckStrategy::Kind::Sample;
      report.downgrades.push_back("enumerate -> sample: " + std::string(err.what()));
    }
  }

  try {
    report.consistency = checkConsistency(model, report.used);
  } catch (const Error& err) {
    report.consistency.kind = ConsistencyVerdict::Kind::Error;
    report.consistency.error = std::string(toString(err.kind())) + ": " + err.what();
  }
  try {
    report.completeness = checkCompleteness(model, report.used);
  } catch (const Error& err) {
    report.completeness.kind = CompletenessVerdict::Kind::Error;
    report.completeness.error = std::string(toString(err.kind())) + ": " + err.what();
  }
  return report;
}

namespace {

Json originJson(const WitnessOrigin& o) {
  Json j;
  j["strategy"] = toString(o.strategy);
  j["seed"] = o.seed;
  j[o.strategy == CheckStrategy::Kind::Trace ? "run" : "index"] = o.index;
  if (o.strategy == CheckStrategy::Kind::Trace) j["step"] = o.step;
  return j;
}

Json strategyJson(const CheckStrategy& s) {
  Json j;
  j["kind"] = toString(s.kind);
  switch (s.kind) {
    case CheckStrategy::Kind::Enumerate: j["limit"] = s.enumerationLimit; break;
    case CheckStrategy::Kind::Sample: j["samples"] = s.samples; break;
    case CheckStrategy::Kind::Trace:
      j["runs"] = s.runs;
      j["stepsPerRun"] = s.stepsPerRun;
      break;
  }
  j["seed"] = s.seed;
  return j;
}

}  // namespace

Json toJson(const AnalysisReport& r) {
  Json j;
  j["model"] = r.modelName;
  j["strategy"] = {{"requested", strategyJson(r.requested)}, {"used", strategyJson(r.used)}};
  j["downgrades"] = r.downgrades;

  Json c;
  switch (r.consistency.kind) {
    case ConsistencyVerdict::Kind::Pass:
      c["verdict"] = "Pass";
      c["statesChecked"] = r.consistency.statesChecked;
      break;
    case ConsistencyVerdict::Kind::Fail:
      c["verdict"] = "Fail";
      c["statesChecked"] = r.consistency.statesChecked;
      c["laws"] = r.consistency.laws;
      c["witness"] = causal::toJson(*r.consistency.witness);
      c["origin"] = originJson(*r.consistency.origin);
      break;
    case ConsistencyVerdict::Kind::Error:
      c["verdict"] = "Error";
      c["error"] = r.consistency.error;
      break;
  }
  j["consistency"] = std::move(c);

  Json k;
  switch (r.completeness.kind) {
    case CompletenessVerdict::Kind::PassBounded:
      k["verdict"] = "PassBounded";
      k["statesChecked"] = r.completeness.statesChecked;
      break;
    case CompletenessVerdict::Kind::PassTrivially: k["verdict"] = "PassTrivially"; break;
    case CompletenessVerdict::Kind::Fail:
      k["verdict"] = "Fail";
      k["statesChecked"] = r.completeness.statesChecked;
      k["law"] = r.completeness.law;
      k["witness"] = causal::toJson(*r.completeness.witness);
      k["inState"] = causal::toJson(*r.completeness.inState);
      k["origin"] = originJson(*r.completeness.origin);
      break;
    case CompletenessVerdict::Kind::Error:
      k["verdict"] = "Error";
      k["error"] = r.completeness.error;
      break;
  }
  j["completeness"] = std::move(k);

  if (r.determinism.deterministic) {
    j["determinism"] = {{"verdict", "Deterministic"}};
  } else {
    j["determinism"] = {{"verdict", "Nondeterministic"}, {"laws", r.determinism.laws}};
  }
  j["computabilityNotes"] = {{"unsampleableFields", r.computability.unsampleableFields},
                             {"intrinsics", r.computability.intrinsics},
                             {"notes", r.computability.notes}};
  j["realityConformance"] = r.realityConformance;
  return j;
}

}  // namespace causal::analysis
