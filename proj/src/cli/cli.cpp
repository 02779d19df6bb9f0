#include "causal/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "causal/analysis/analyzer.hpp"
#include "causal/cml/frontend.hpp"
#include "causal/engine/engine.hpp"
#include "causal/engine/rng.hpp"
#include "causal/error.hpp"
#include "causal/interp/branch.hpp"
#include "causal/quantum/bundled.hpp"

namespace causal::cli {

namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";
constexpr std::uint64_t kInitStream = 0x494E4954;  // "INIT"

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Raised for problems that must exit with status 1 after the diagnostics
// have been printed.
struct ModelFailure {};

struct LoadedModel {
  ModelPtr model;
  SystemState init;
};

LoadedModel loadModel(const std::string& ref, const std::map<std::string, std::string>& params, std::uint64_t seed,
                      std::ostream& err) {
  if (ref.rfind(kBuiltinPrefix, 0) == 0) {
    auto bundled = quantum::buildBundledModel(ref.substr(kBuiltinPrefix.size()), params);
    return {bundled.model, bundled.init};
  }
  std::ifstream in(ref, std::ios::binary);
  if (!in) {
    err << ref << ": error: cannot read model file\n";
    throw ModelFailure{};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto compiled = cml::compileModel(buffer.str(), params);
  for (const auto& d : compiled.diagnostics) err << cml::format(d, ref) << '\n';
  if (!compiled.model) throw ModelFailure{};
  RngStream rng(deriveSeed(seed, kInitStream));
  SystemState init = initialState(*compiled.model, rng);
  return {compiled.model, std::move(init)};
}

std::vector<std::string> defaultObservables(const CausalModel& model) {
  std::vector<std::string> names;
  for (const auto& [name, type] : model.schema->fields) {
    if (type.kind == TypeDesc::Kind::Int || type.kind == TypeDesc::Kind::Real || type.kind == TypeDesc::Kind::Bool) {
      names.push_back(name);
    }
  }
  if (names.empty() && !model.outcomeText.empty()) names.push_back(model.outcomeText);
  return names;
}

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

struct Options {
  std::string model;
  double dt = std::numeric_limits<double>::quiet_NaN();
  std::size_t steps = 1000;
  std::uint64_t seed = 0;
  std::string mode = "strict";
  std::size_t recordEvery = 1;
  std::string observables;
  std::string outPath;
  std::string format = "csv";
  std::string strategy = "sample";
  std::size_t samples = 1000;
  std::size_t runs = 10;
  std::size_t depth = 16;
  std::size_t width = 1024;
  std::vector<std::string> params;
  std::size_t bins = 0;
  std::size_t trials = 1000;
  std::size_t traceSteps = 100;
};

std::map<std::string, std::string> parseParams(const std::vector<std::string>& items) {
  std::map<std::string, std::string> params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected key=value, got '" + item + "'");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

interp::RunConfig runConfig(const Options& o, const CausalModel& model) {
  interp::RunConfig cfg;
  cfg.dt = std::isnan(o.dt) ? model.defaultTimestep : o.dt;
  cfg.maxSteps = o.steps;
  cfg.seed = o.seed;
  cfg.mode = o.mode == "first-match" ? SelectionMode::FirstMatch : SelectionMode::Strict;
  cfg.recordEvery = o.recordEvery;
  cfg.observables = o.observables.empty() ? defaultObservables(model) : splitList(o.observables);
  return cfg;
}

// Writes to --out when given, otherwise to `out`.
template <class F>
void emit(const Options& o, std::ostream& out, F&& write) {
  if (o.outPath.empty()) {
    write(out);
    return;
  }
  std::ofstream file(o.outPath, std::ios::binary);
  if (!file) throw Error(ErrorKind::SinkError, "cannot open '" + o.outPath + "' for writing", o.outPath);
  write(file);
  file.flush();
  if (!file) throw Error(ErrorKind::SinkError, "write to '" + o.outPath + "' failed", o.outPath);
}

bool isErrorTermination(interp::Termination t) {
  return t == interp::Termination::NoApplicableLaw || t == interp::Termination::MultipleApplicable ||
         t == interp::Termination::EvalError;
}

int cmdRun(const Options& o, std::ostream& out, std::ostream& err) {
  auto loaded = loadModel(o.model, parseParams(o.params), o.seed, err);
  const auto cfg = runConfig(o, *loaded.model);
  const auto trace = interp::run(*loaded.model, loaded.init, cfg);
  const auto format = o.format == "jsonl" ? interp::TraceFormat::Jsonl : interp::TraceFormat::Csv;
  emit(o, out, [&](std::ostream& sink) { interp::writeTrace(trace, format, sink); });
  if (isErrorTermination(trace.termination.kind)) {
    err << "run ended with " << interp::toString(trace.termination.kind) << ": " << trace.termination.message << '\n';
  }
  return 0;
}

int cmdAnalyze(const Options& o, std::ostream& out, std::ostream& err) {
  auto loaded = loadModel(o.model, parseParams(o.params), o.seed, err);
  analysis::CheckStrategy strategy;
  if (o.strategy == "enumerate") {
    strategy = analysis::CheckStrategy::enumerate();
    strategy.seed = o.seed;
  } else if (o.strategy == "trace") {
    strategy = analysis::CheckStrategy::trace(o.runs, o.traceSteps, o.seed);
  } else {
    strategy = analysis::CheckStrategy::sample(o.samples, o.seed);
  }
  const auto report = analysis::analyze(*loaded.model, strategy);
  emit(o, out, [&](std::ostream& sink) { sink << analysis::toJson(report).dump(2) << '\n'; });
  return 0;
}

int cmdBranch(const Options& o, std::ostream& out, std::ostream& err) {
  auto loaded = loadModel(o.model, parseParams(o.params), o.seed, err);
  auto cfg = runConfig(o, *loaded.model);
  cfg.observables.clear();
  const auto tree = interp::branchRun(*loaded.model, loaded.init, cfg, o.depth, o.width);
  emit(o, out, [&](std::ostream& sink) { sink << interp::toJson(tree).dump(2) << '\n'; });
  return 0;
}

int cmdHistogram(const Options& o, std::ostream& out, std::ostream& err) {
  auto loaded = loadModel(o.model, parseParams(o.params), o.seed, err);
  auto cfg = runConfig(o, *loaded.model);
  std::string observable;
  if (!o.observables.empty()) {
    observable = splitList(o.observables).at(0);
  } else if (!loaded.model->outcomeText.empty()) {
    observable = loaded.model->outcomeText;
  } else {
    throw Error(ErrorKind::UnknownObservable,
                "model '" + loaded.model->name + "' declares no outcome; pass --observables", loaded.model->name);
  }
  cfg.observables.clear();
  const auto h = histogram(*loaded.model, loaded.init, observable, o.trials, o.seed, o.bins, cfg);
  emit(o, out, [&](std::ostream& sink) {
    sink << "bin,count,frequency\n";
    for (const auto& b : h.bins) sink << b.label << ',' << b.count << ',' << num(b.frequency) << '\n';
  });
  return 0;
}

int cmdList(std::ostream& out) {
  for (const auto& name : quantum::bundledModelNames()) {
    out << kBuiltinPrefix << name << "  " << quantum::bundledSummary(name) << '\n';
  }
  return 0;
}

void addModelOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("model", o.model, "model file (.cml) or builtin:<name>")->required();
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--param", o.params, "key=value, forwarded to the model (repeatable)");
  cmd->add_option("--out", o.outPath, "output path (default: standard output)");
}

void addRunOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--dt", o.dt, "timestep (default: model timestep)")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", o.steps, "step bound");
  cmd->add_option("--mode", o.mode, "law selection")->check(CLI::IsMember({"strict", "first-match"}));
}

}  // namespace

Histogram histogram(const CausalModel& model, const SystemState& init, const std::string& observable,
                    std::size_t trials, std::uint64_t seed, std::size_t bins, const interp::RunConfig& cfg) {
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "histogram needs at least one trial");
  const auto obs = cml::compileObservable(model, observable);
  Histogram h;
  h.observable = observable;
  h.trials = trials;
  h.samples.reserve(trials);

  interp::RunConfig trialCfg = cfg;
  trialCfg.observables.clear();
  trialCfg.recordEvery = std::max<std::size_t>(cfg.maxSteps, 1);
  bool integral = true;
  for (std::size_t i = 0; i < trials; ++i) {
    trialCfg.seed = deriveSeed(seed, i);
    const auto trace = interp::run(model, init, trialCfg);
    if (isErrorTermination(trace.termination.kind)) {
      throw Error(ErrorKind::EvalError,
                  "trial " + std::to_string(i) + " ended with " + interp::toString(trace.termination.kind) + ": " +
                      trace.termination.message,
                  model.name);
    }
    const Value v = cml::evalObservable(model, obs, *trace.finalState, trialCfg.dt);
    if (!v.isInt() && !v.isBool()) integral = false;
    h.samples.push_back(v.isBool() ? (v.asBool() ? 1.0 : 0.0) : v.toDouble());
  }

  const auto [minIt, maxIt] = std::minmax_element(h.samples.begin(), h.samples.end());
  double lo = *minIt;
  double hi = *maxIt;
  if (integral && bins == 0) {
    if (auto idx = model.schema->fieldIndex(observable)) {
      const auto& domain = model.schema->fields[*idx].second.domain;
      if (domain && domain->kind == Domain::Kind::Interval) {
        lo = std::min(lo, domain->lo);
        hi = std::max(hi, domain->hi);
      }
    }
    for (double x = lo; x <= hi; x += 1.0) {
      h.bins.push_back({x - 0.5, x + 0.5, std::to_string(static_cast<long long>(x)), 0, 0.0});
    }
    for (double x : h.samples) ++h.bins[static_cast<std::size_t>(x - lo)].count;
  } else {
    const std::size_t n = bins == 0 ? 64 : bins;
    const double width = hi > lo ? (hi - lo) / static_cast<double>(n) : 1.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double a = lo + width * static_cast<double>(b);
      h.bins.push_back({a, a + width, num(a), 0, 0.0});
    }
    for (double x : h.samples) {
      auto b = static_cast<std::size_t>(std::floor((x - lo) / width));
      ++h.bins[std::min(b, n - 1)].count;
    }
  }
  for (auto& b : h.bins) b.frequency = static_cast<double>(b.count) / static_cast<double>(trials);
  return h;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal model toolkit", "causal"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "evolve a model and write its trace");
  addModelOptions(run, o);
  addRunOptions(run, o);
  run->add_option("--record-every", o.recordEvery, "keep every n-th step")->check(CLI::PositiveNumber);
  run->add_option("--observables", o.observables, "comma-separated CML expressions");
  run->add_option("--format", o.format, "trace format")->check(CLI::IsMember({"csv", "jsonl"}));

  auto* analyze = app.add_subcommand("analyze", "check consistency, completeness and determinism");
  addModelOptions(analyze, o);
  analyze->add_option("--steps", o.traceSteps, "steps per trace run");
  analyze->add_option("--strategy", o.strategy, "state source")
      ->check(CLI::IsMember({"enumerate", "sample", "trace"}));
  analyze->add_option("--samples", o.samples, "sampled states")->check(CLI::PositiveNumber);
  analyze->add_option("--runs", o.runs, "trace runs")->check(CLI::PositiveNumber);

  auto* branch = app.add_subcommand("branch", "many-worlds execution, world tree as JSON");
  addModelOptions(branch, o);
  addRunOptions(branch, o);
  branch->add_option("--depth", o.depth, "random draws per lineage");
  branch->add_option("--width", o.width, "live lineages")->check(CLI::PositiveNumber);

  auto* hist = app.add_subcommand("histogram", "bin an outcome over seeded trials");
  addModelOptions(hist, o);
  addRunOptions(hist, o);
  hist->add_option("--observables", o.observables, "observable to bin (default: model outcome)");
  hist->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  hist->add_option("--bins", o.bins, "bin count (default: one per integer value)");

  auto* list = app.add_subcommand("list-models", "list bundled models");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    err << "run 'causal --help' for usage\n";
    return 2;
  }

  try {
    if (list->parsed()) return cmdList(out);
    if (run->parsed()) return cmdRun(o, out, err);
    if (analyze->parsed()) return cmdAnalyze(o, out, err);
    if (branch->parsed()) return cmdBranch(o, out, err);
    if (hist->parsed()) return cmdHistogram(o, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ModelFailure&) {
    return 1;
  } catch (const Error& e) {
    err << "error[" << toString(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace causal::cli
