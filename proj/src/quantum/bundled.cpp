#include "causal/quantum/bundled.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <set>
#include <string_view>

#include "causal/cml/frontend.hpp"
#include "causal/engine/engine.hpp"
#include "causal/error.hpp"
#include "causal/quantum/ca.hpp"

namespace causal::quantum {

namespace {

const std::map<std::string, std::string_view> kSources = {
#include "causal/bundled_sources.inc"
};

const std::vector<std::string> kNative = {"double_slit", "entangled_pair", "qftca_toy"};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

double realParam(const std::map<std::string, std::string>& params, const std::string& key, double fallback,
                 bool positive) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (it->second.empty() || *end != '\0' || !std::isfinite(v) || (positive && !(v > 0.0))) {
    throw Error(ErrorKind::BadParam, "parameter '" + key + "' needs a " + (positive ? "positive " : "") +
                                         "number, got '" + it->second + "'",
                key);
  }
  return v;
}

void rejectUnknown(const std::string& model, const std::map<std::string, std::string>& params,
                   const std::set<std::string>& known) {
  for (const auto& [key, value] : params) {
    if (!known.count(key)) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw Error(ErrorKind::BadParam,
                  "model '" + model + "' has no parameter '" + key + "'" +
                      (list.empty() ? " (it takes none)" : " (known: " + list + ")"),
                  key);
    }
  }
}

bool detectorOn(const std::map<std::string, std::string>& params) {
  auto it = params.find("detector");
  if (it == params.end() || it->second == "off") return false;
  if (it->second == "on") return true;
  throw Error(ErrorKind::BadParam, "parameter 'detector' must be on or off, got '" + it->second + "'", "detector");
}

DoubleSlitGeometry geometryFrom(const std::map<std::string, std::string>& params) {
  DoubleSlitGeometry g;
  g.slitSeparation = realParam(params, "slit_separation", g.slitSeparation, true);
  g.screenDistance = realParam(params, "screen_distance", g.screenDistance, true);
  g.k = realParam(params, "k", g.k, true);
  return g;
}

std::string doubleSlitSource(const DoubleSlitGeometry& g, bool detector) {
  const auto edges = screenEdges(g);
  std::string edgeList;
  for (std::size_t i = 0; i < edges.size(); ++i) edgeList += (i ? ", " : "") + num(edges[i]);
  std::string src;
  src += "// Two-slit experiment with a pw collection of (slit, screen bin) paths.\n";
  src += "// detector = " + std::string(detector ? "on" : "off") + "\n";
  src += "model double_slit {\n";
  src += "  const edges: vector(" + std::to_string(edges.size()) + ") = [" + edgeList + "];\n";
  src += "  state {\n";
  src += "    stage: int in {0, 1, 2, 3};\n";
  src += "    photon: pw(position: real, velocity: real, slit: int in {0, 1});\n";
  src += "    bin: int in [-1, " + std::to_string(g.bins - 1) + "];\n";
  src += "  }\n";
  src += "  timestep 1.0;\n";
  src += "  halt when stage == " + std::string(detector ? "3" : "2") + ";\n";
  src += "  outcome bin;\n";
  src += "  law Propagate {\n    when stage == 0;\n    then {\n      photon = pw_propagate(photon);\n"
         "      stage = 1;\n    }\n  }\n";
  if (detector) {
    src += "  law WhichPath {\n    when stage == 1;\n    then {\n      photon = pw_interact(photon);\n"
           "      stage = 2;\n    }\n  }\n";
    src += "  law Detect {\n    when stage == 2;\n    then {\n      bin = pw_detect(photon, edges, true);\n"
           "      stage = 3;\n    }\n  }\n";
  } else {
    src += "  law Detect {\n    when stage == 1;\n    then {\n      bin = pw_detect(photon, edges, false);\n"
           "      stage = 2;\n    }\n  }\n";
  }
  src += "}\n";
  return src;
}

std::string entangledSource() {
  return "// Two spin-1/2 particles in one pw collection with anti-correlated paths.\n"
         "model entangled_pair {\n"
         "  state {\n"
         "    stage: int in {0, 1, 2};\n"
         "    pair: pw(spin: int in {-1, 1});\n"
         "    spin1: int in {-1, 0, 1};\n"
         "    spin2: int in {-1, 0, 1};\n"
         "  }\n"
         "  halt when stage == 2;\n"
         "  outcome spin1 * spin2;\n"
         "  law Measure {\n    when stage == 0;\n    then {\n      pair = pw_interact(pair);\n"
         "      stage = 1;\n    }\n  }\n"
         "  law Record {\n    when stage == 1;\n    then {\n      spin1 = pair.spin[0];\n"
         "      spin2 = pair.spin[1];\n      stage = 2;\n    }\n  }\n"
         "}\n";
}

constexpr std::size_t kCaCells = 10;

std::string qftcaSource(double alpha) {
  return "// Cellular toy: diffusing field plus particles that exchange velocities on contact.\n"
         "model qftca_toy {\n" +
         caRecordSource(kCaCells) + "  const alpha: real = " + num(alpha) +
         ";\n"
         "  state {\n"
         "    world: World;\n"
         "  }\n"
         "  outcome sum(world.particles.v);\n"
         "  law Update {\n    when true;\n    then {\n      world = ca_step(world, alpha);\n    }\n  }\n"
         "}\n";
}

ModelPtr compileOrThrow(const std::string& name, const std::string& source,
                        const std::map<std::string, std::string>& consts) {
  auto compiled = cml::compileModel(source, consts);
  if (!compiled.model) {
    std::string message = "bundled model '" + name + "' failed to compile";
    for (const auto& d : compiled.diagnostics) message += "\n" + cml::format(d, name + ".cml");
    throw Error(ErrorKind::InvalidArgument, message, name);
  }
  return compiled.model;
}

SystemState presetState(const ModelPtr& model, std::map<std::string, Value> values) {
  return makeInitialState(model->schema, values);
}

}  // namespace

std::vector<std::string> bundledModelNames() {
  return {"counter", "harmonic_oscillator", "free_particle", "schrodinger_1d",
          "double_slit", "entangled_pair", "qftca_toy"};
}

std::string bundledSummary(const std::string& name) {
  static const std::map<std::string, std::string> summaries = {
      {"counter", "integer counter halting at n = 10"},
      {"harmonic_oscillator", "particles in V = k x^2 / 2, velocity Verlet (param k)"},
      {"free_particle", "force-free motion x += v dt"},
      {"schrodinger_1d", "free Gaussian packet, Crank-Nicolson (params m, hbar, x0, sigma0, k0, V0)"},
      {"double_slit", "two-slit detection histogram (params detector=on|off, slit_separation, screen_distance, k)"},
      {"entangled_pair", "collapse of an anti-correlated two-particle pw collection"},
      {"qftca_toy", "cellular field plus colliding particles (param alpha)"},
  };
  auto it = summaries.find(name);
  if (it == summaries.end()) throw Error(ErrorKind::UnknownModel, "unknown bundled model '" + name + "'", name);
  return it->second;
}

std::vector<double> screenEdges(const DoubleSlitGeometry& g) {
  std::vector<double> edges(g.bins + 1);
  const double width = 2.0 * g.screenHalfWidth / static_cast<double>(g.bins);
  for (std::size_t i = 0; i <= g.bins; ++i) edges[i] = -g.screenHalfWidth + width * static_cast<double>(i);
  return edges;
}

PwCollection doubleSlitPaths(const DoubleSlitGeometry& g) {
  const auto edges = screenEdges(g);
  PwCollection pw({{"position", TypeDesc::real()}, {"velocity", TypeDesc::real()}, {"slit", TypeDesc::integer()}}, 1);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(g.bins));
  for (int slit = 0; slit < 2; ++slit) {
    const double y = slit == 0 ? -g.slitSeparation / 2.0 : g.slitSeparation / 2.0;
    for (std::size_t b = 0; b < g.bins; ++b) {
      const double centre = 0.5 * (edges[b] + edges[b + 1]);
      const double r = std::hypot(g.screenDistance, centre - y);
      const double values[] = {y, centre - y, static_cast<double>(slit)};
      pw.addPath(values, std::polar(scale, g.k * r));
    }
  }
  return pw;
}

PwCollection entangledSpinPair() {
  PwCollection pw({{"spin", TypeDesc::integer()}}, 2);
  const double a = 1.0 / std::sqrt(2.0);
  const double up[] = {1.0, -1.0};
  const double down[] = {-1.0, 1.0};
  pw.addPath(up, a);
  pw.addPath(down, a);
  return pw;
}

std::string bundledSource(const std::string& name, const std::map<std::string, std::string>& params) {
  if (name == "double_slit") {
    rejectUnknown(name, params, {"detector", "slit_separation", "screen_distance", "k"});
    return doubleSlitSource(geometryFrom(params), detectorOn(params));
  }
  if (name == "entangled_pair") {
    rejectUnknown(name, params, {});
    return entangledSource();
  }
  if (name == "qftca_toy") {
    rejectUnknown(name, params, {"alpha"});
    return qftcaSource(realParam(params, "alpha", 0.2, false));
  }
  auto it = kSources.find(name);
  if (it == kSources.end()) throw Error(ErrorKind::UnknownModel, "unknown bundled model '" + name + "'", name);
  return std::string(it->second);
}

BundledModel buildBundledModel(const std::string& name, const std::map<std::string, std::string>& params) {
  const std::string source = bundledSource(name, params);
  const bool native = std::find(kNative.begin(), kNative.end(), name) != kNative.end();
  auto model = std::const_pointer_cast<CausalModel>(
      compileOrThrow(name, source, native ? std::map<std::string, std::string>{} : params));
  if (name == "double_slit") {
    model->presetInit = presetState(model, {{"stage", Value::integer(0)},
                                            {"photon", Value::pw(doubleSlitPaths(geometryFrom(params)))},
                                            {"bin", Value::integer(-1)}});
  } else if (name == "entangled_pair") {
    model->presetInit = presetState(model, {{"stage", Value::integer(0)},
                                            {"pair", Value::pw(entangledSpinPair())},
                                            {"spin1", Value::integer(0)},
                                            {"spin2", Value::integer(0)}});
  } else if (name == "qftca_toy") {
    CaWorld world;
    world.phi.assign(kCaCells, 0.0);
    world.phi[0] = 1.0;
    world.particles = {{1, 2, 1, 0}, {2, 6, -1, 1}};
    const auto& worldType = model->schema->fields.at(0).second;
    Value like = zeroValue(worldType, model->schema->records);
    const auto& particleDecl = model->schema->record("CaParticle");
    std::vector<Value> particles;
    for (std::size_t i = 0; i < world.particles.size(); ++i) {
      particles.push_back(zeroValue(TypeDesc::record(particleDecl.name), model->schema->records));
    }
    for (auto& [member, v] : like.asRecord().members) {
      if (member == "particles") v = Value::list(std::move(particles));
    }
    model->presetInit = presetState(model, {{"world", caWorldToValue(world, like)}});
  }
  model->validate();
  RngStream rng(0);
  SystemState init = initialState(*model, rng);
  return BundledModel{model, std::move(init)};
}

}  // namespace causal::quantum
