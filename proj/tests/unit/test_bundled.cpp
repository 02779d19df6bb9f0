#include <doctest.h>

#include "causal/engine/engine.hpp"
#include "causal/interp/interpreter.hpp"
#include "causal/quantum/bundled.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::quantum;

TEST_SUITE("bundled") {
  TEST_CASE("the seven bundled models") {
    const std::vector<std::string> expected = {"counter", "harmonic_oscillator", "free_particle", "schrodinger_1d",
                                               "double_slit", "entangled_pair", "qftca_toy"};
    CHECK(bundledModelNames() == expected);
    for (const auto& name : expected) CHECK_FALSE(bundledSummary(name).empty());
  }

  TEST_CASE("counter runs to n = 10") {
    auto b = buildBundledModel("counter");
    auto t = interp::run(*b.model, b.init, interp::RunConfig{});
    CHECK(t.finalState->value("n").asInt() == 10);
  }

  TEST_CASE("determinism classification") {
    CHECK(classifyDeterminism(*buildBundledModel("schrodinger_1d").model).deterministic);
    CHECK(classifyDeterminism(*buildBundledModel("harmonic_oscillator").model).deterministic);
    CHECK(classifyDeterminism(*buildBundledModel("qftca_toy").model).deterministic);
    auto off = classifyDeterminism(*buildBundledModel("double_slit", {{"detector", "off"}}).model);
    CHECK_FALSE(off.deterministic);
    CHECK(off.laws == std::vector<std::string>{"Detect"});
    auto on = classifyDeterminism(*buildBundledModel("double_slit", {{"detector", "on"}}).model);
    CHECK(on.laws == std::vector<std::string>{"WhichPath", "Detect"});
    CHECK_FALSE(classifyDeterminism(*buildBundledModel("entangled_pair").model).deterministic);
  }

  TEST_CASE("the detector switch adds the which-path law") {
    CHECK(buildBundledModel("double_slit", {{"detector", "off"}}).model->findLaw("WhichPath") == nullptr);
    CHECK(buildBundledModel("double_slit", {{"detector", "on"}}).model->findLaw("WhichPath") != nullptr);
  }

  TEST_CASE("parameters override constants") {
    auto b = buildBundledModel("harmonic_oscillator", {{"k", "4.0"}});
    CHECK(b.model);
    CHECK_NOTHROW(buildBundledModel("qftca_toy", {{"alpha", "0.1"}}));
  }

  TEST_CASE("unknown names and bad params") {
    CHECK(testsupport::errorKind([] { buildBundledModel("nope"); }) == "UnknownModel");
    CHECK(testsupport::errorKind([] { buildBundledModel("double_slit", {{"detector", "maybe"}}); }) == "BadParam");
    CHECK(testsupport::errorKind([] { buildBundledModel("counter", {{"bogus", "1"}}); }) == "BadParam");
    CHECK(testsupport::errorKind([] { buildBundledModel("entangled_pair", {{"k", "1"}}); }) == "BadParam");
    CHECK(testsupport::errorKind([] { buildBundledModel("double_slit", {{"k", "abc"}}); }) == "BadParam");
  }

  TEST_CASE("every bundled model runs to a non-error termination") {
    for (const auto& name : bundledModelNames()) {
      CAPTURE(name);
      auto b = buildBundledModel(name);
      interp::RunConfig cfg;
      cfg.maxSteps = 200;
      auto t = interp::run(*b.model, b.init, cfg);
      const std::string kind(toString(t.termination.kind));
      CHECK((kind == "Halted" || kind == "MaxSteps"));
    }
  }

  TEST_CASE("bundled CML sources compile on their own") {
    for (const auto& name : {"counter", "harmonic_oscillator", "free_particle", "schrodinger_1d"}) {
      CAPTURE(name);
      auto r = cml::compileModel(bundledSource(name));
      CHECK(r.model);
    }
  }
}
