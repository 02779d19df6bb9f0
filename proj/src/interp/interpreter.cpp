#include "causal/interp/interpreter.hpp"

#include <cmath>
#include <sstream>

#include "causal/cml/frontend.hpp"
#include "causal/engine/evaluator.hpp"

namespace causal::interp {

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (maxSteps < 1) throw Error(ErrorKind::InvalidArgument, "maxSteps must be at least 1");
  if (recordEvery < 1) throw Error(ErrorKind::InvalidArgument, "recordEvery must be at least 1");
}

std::string toString(Termination t) {
  switch (t) {
    case Termination::Halted: return "Halted";
    case Termination::MaxSteps: return "MaxSteps";
    case Termination::NoApplicableLaw: return "NoApplicableLaw";
    case Termination::MultipleApplicable: return "MultipleApplicable";
    case Termination::EvalError: return "EvalError";
    case Termination::DepthBound: return "DepthBound";
    case Termination::Pruned: return "Pruned";
  }
  return "";
}

Trace run(const CausalModel& model, const SystemState& init, const RunConfig& cfg) {
  cfg.validate();
  if (!init.schema()->sameLayout(*model.schema)) {
    throw Error(ErrorKind::SchemaMismatch, "initial state does not match model '" + model.name + "'", model.name);
  }
  std::vector<cml::Observable> observables;
  for (const auto& text : cfg.observables) observables.push_back(cml::compileObservable(model, text));

  Trace trace;
  trace.modelName = model.name;
  trace.config = cfg;
  trace.observableNames = cfg.observables;

  RngStream rng(cfg.seed);
  StreamRandomSource source(rng);
  const double t0 = init.time();
  SystemState s = init;

  auto record = [&](std::size_t k) {
    TraceRow row;
    row.step = k;
    row.time = s.time();
    for (const auto& obs : observables) row.values.push_back(cml::evalObservable(model, obs, s, cfg.dt));
    if (cfg.snapshots) row.snapshot = s;
    trace.rows.push_back(std::move(row));
  };

  std::size_t k = 0;
  try {
    record(0);
    while (true) {
      if (evalHalt(model, s, cfg.dt)) {
        trace.termination = {Termination::Halted, "halt condition holds", std::nullopt, {}};
        break;
      }
      if (k == cfg.maxSteps) {
        trace.termination = {Termination::MaxSteps, "step bound reached", std::nullopt, {}};
        break;
      }
      SystemState next = step(model, s, cfg.dt, source, cfg.mode);
      ++k;
      next.setTime(t0 + static_cast<double>(k) * cfg.dt);
      s = std::move(next);
      if (k % cfg.recordEvery == 0) record(k);
    }
  } catch (const LawSelectionError& err) {
    const bool gap = err.kind() == ErrorKind::NoApplicableLaw;
    trace.termination = {gap ? Termination::NoApplicableLaw : Termination::MultipleApplicable, err.what(),
                         err.witness(), err.laws()};
  } catch (const Error& err) {
    trace.termination = {Termination::EvalError, std::string(toString(err.kind())) + ": " + err.what(), s, {}};
  }
  trace.steps = k;
  trace.finalState = s;
  return trace;
}

std::string formatCell(const Value& v) {
  if (v.isBool()) return v.asBool() ? "true" : "false";
  if (v.isInt()) return std::to_string(v.asInt());
  return render(v);
}

namespace {

Json cellJson(const Value& v) {
  if (v.isBool()) return v.asBool();
  if (v.isInt()) return v.asInt();
  return toJson(v);
}

}  // namespace

Json toJson(const TerminationReason& reason) {
  Json j;
  j["kind"] = toString(reason.kind);
  j["message"] = reason.message;
  if (!reason.laws.empty()) j["laws"] = reason.laws;
  if (reason.witness) j["witness"] = causal::toJson(*reason.witness);
  return j;
}

Json configJson(const RunConfig& cfg) {
  Json j;
  j["dt"] = cfg.dt;
  j["maxSteps"] = cfg.maxSteps;
  j["seed"] = cfg.seed;
  j["mode"] = toString(cfg.mode);
  j["recordEvery"] = cfg.recordEvery;
  j["observables"] = cfg.observables;
  return j;
}

std::size_t writeTrace(const Trace& trace, TraceFormat format, std::ostream& out) {
  std::ostringstream buf;
  if (format == TraceFormat::Csv) {
    buf << "step,time";
    for (const auto& name : trace.observableNames) {
      const bool quote = name.find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        std::string escaped;
        for (char c : name) escaped += c == '"' ? std::string("\"\"") : std::string(1, c);
        buf << ",\"" << escaped << '"';
      } else {
        buf << ',' << name;
      }
    }
    buf << '\n';
    for (const auto& row : trace.rows) {
      buf << row.step << ',' << render(Value::real(row.time));
      for (const auto& v : row.values) buf << ',' << formatCell(v);
      buf << '\n';
    }
  } else {
    for (const auto& row : trace.rows) {
      Json j;
      j["step"] = row.step;
      j["time"] = row.time;
      Json values = Json::object();
      for (std::size_t i = 0; i < row.values.size(); ++i) values[trace.observableNames[i]] = cellJson(row.values[i]);
      j["values"] = std::move(values);
      if (row.snapshot) j["state"] = causal::toJson(*row.snapshot);
      buf << j.dump() << '\n';
    }
    Json meta;
    meta["model"] = trace.modelName;
    meta["config"] = configJson(trace.config);
    meta["steps"] = trace.steps;
    meta["terminationReason"] = toJson(trace.termination);
    buf << meta.dump() << '\n';
  }
  const std::string text = buf.str();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::SinkError, "failed to write trace");
  return text.size();
}

}  // namespace causal::interp
