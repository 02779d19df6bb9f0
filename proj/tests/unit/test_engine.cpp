#include <doctest.h>

#include <filesystem>

#include "causal/engine/engine.hpp"
#include "causal/engine/evaluator.hpp"
#include "causal/quantum/bundled.hpp"
#include "support.hpp"

using namespace causal;
using testsupport::compile;
using testsupport::compileFixture;

namespace {

std::string oneField(const std::string& field, const std::string& laws, const std::string& extra = "") {
  return "model T {\n" + extra + "  state {\n    " + field + ";\n  }\n" + laws + "}\n";
}

std::string law(const std::string& name, const std::string& guard, const std::string& body) {
  return "  law " + name + " {\n    when " + guard + ";\n    then {\n      " + body + "\n    }\n  }\n";
}

SystemState stateWith(const ModelPtr& m, std::map<std::string, Value> values) {
  return makeInitialState(m->schema, values);
}

const Law& lawOf(const Selection& sel) {
  REQUIRE(std::holds_alternative<const Law*>(sel));
  return *std::get<const Law*>(sel);
}

}  // namespace

TEST_SUITE("law-engine") {
  TEST_CASE("evalGuard") {
    auto always = compile(oneField("n: int in [0, 200]", law("A", "true", "n = n;")));
    CHECK(evalGuard(*always, always->laws[0], stateWith(always, {{"n", Value::integer(5)}}), 1.0));

    auto bounded = compile(oneField("n: int in [0, 200]", law("A", "n < 100", "n = n;")));
    CHECK_FALSE(evalGuard(*bounded, bounded->laws[0], stateWith(bounded, {{"n", Value::integer(100)}}), 1.0));

    auto indexed = compile(oneField("xs: list(real)", law("A", "xs[5] > 0.0", "xs = xs;")));
    auto s = stateWith(indexed, {{"xs", Value::list({Value::real(1), Value::real(2), Value::real(3)})}});
    CHECK(testsupport::errorKind([&] { evalGuard(*indexed, indexed->laws[0], s, 1.0); }) == "EvalError");
  }

  TEST_CASE("selectLaw: partition, overlap and gap") {
    auto partition = compileFixture("partition.cml");
    auto zero = stateWith(partition, {{"x", Value::real(0.0)}});
    CHECK(lawOf(selectLaw(*partition, zero, SelectionMode::Strict, 1.0)).name == "NonNegative");

    auto overlap = compileFixture("overlap.cml");
    auto inBoth = stateWith(overlap, {{"x", Value::real(0.0)}});
    auto sel = selectLaw(*overlap, inBoth, SelectionMode::Strict, 1.0);
    REQUIRE(std::holds_alternative<MultipleApplicable>(sel));
    CHECK(std::get<MultipleApplicable>(sel).laws == std::vector<std::string>{"Left", "Right"});
    CHECK(lawOf(selectLaw(*overlap, inBoth, SelectionMode::FirstMatch, 1.0)).name == "Left");

    auto escaping = compileFixture("escaping.cml");
    auto outside = stateWith(escaping, {{"x", Value::real(2.0)}});
    auto gap = selectLaw(*escaping, outside, SelectionMode::Strict, 1.0);
    REQUIRE(std::holds_alternative<NoApplicableLaw>(gap));
    CHECK(std::get<NoApplicableLaw>(gap).witness.value("x").asReal() == 2.0);
  }

  TEST_CASE("applyLaw") {
    auto counter = quantum::buildBundledModel("counter").model;
    RngStream rng(0);
    auto s1 = applyLaw(*counter, counter->laws[0], stateWith(counter, {{"n", Value::integer(7)}}), 1.0, rng);
    CHECK(s1.value("n").asInt() == 8);
    CHECK(s1.time() == 0.0);

    auto swap = compileFixture("swap.cml");
    auto swapped = applyLaw(*swap, swap->laws[0], initialState(*swap, rng), 1.0, rng);
    CHECK(swapped.value("a").asInt() == 2);
    CHECK(swapped.value("b").asInt() == 1);

    auto degenerate = compile(oneField("k: int in {0, 1}", law("A", "true", "k = random({0, 1}, WEIGHTS(1, 0));")));
    auto s = stateWith(degenerate, {{"k", Value::integer(1)}});
    for (int i = 0; i < 200; ++i) REQUIRE(applyLaw(*degenerate, degenerate->laws[0], s, 1.0, rng).value("k").asInt() == 0);
  }

  TEST_CASE("step advances time and enforces strict selection") {
    auto counter = quantum::buildBundledModel("counter").model;
    RngStream rng(0);
    auto s1 = step(*counter, stateWith(counter, {{"n", Value::integer(0)}}), 1.0, rng);
    CHECK(s1.value("n").asInt() == 1);
    CHECK(s1.time() == 1.0);

    auto overlap = compileFixture("overlap.cml");
    try {
      step(*overlap, stateWith(overlap, {{"x", Value::real(0.25)}}), 1.0, rng);
      FAIL("expected MultipleApplicable");
    } catch (const LawSelectionError& e) {
      CHECK(std::string(toString(e.kind())) == "MultipleApplicable");
      CHECK(e.laws().size() == 2);
      CHECK(e.witness().value("x").asReal() == 0.25);
    }
    CHECK(testsupport::errorKind([&] { step(*counter, stateWith(counter, {{"n", Value::integer(0)}}), 0.0, rng); }) ==
          "InvalidArgument");
  }

  TEST_CASE("transitions see dt and time of the pre-state") {
    auto m = compile(oneField("x: real", law("A", "true", "x = time + 10.0 * dt;")));
    RngStream rng(0);
    auto s = step(*m, stateWith(m, {{"x", Value::real(0)}}).withTime(2.0), 0.5, rng);
    CHECK(s.value("x").asReal() == 7.0);
    CHECK(s.time() == 2.5);
  }

  TEST_CASE("for loops update list elements and if/else branches") {
    auto m = compile(oneField("xs: list(int)", law("A", "true", "for v in xs { if v > 1 { v = v * 10; } else { v = 0 - v; } }")));
    RngStream rng(0);
    auto s = stateWith(m, {{"xs", Value::list({Value::integer(1), Value::integer(2), Value::integer(3)})}});
    auto out = step(*m, s, 1.0, rng);
    const auto& items = out.value("xs").asList().items;
    CHECK(items[0].asInt() == -1);
    CHECK(items[1].asInt() == 20);
    CHECK(items[2].asInt() == 30);
  }

  TEST_CASE("runtime errors name the law and location") {
    auto m = compile(oneField("x: real", law("Div", "true", "x = 1.0 / (x - x);")));
    RngStream rng(0);
    try {
      step(*m, stateWith(m, {{"x", Value::real(3)}}), 1.0, rng);
      FAIL("expected EvalError");
    } catch (const Error& e) {
      CHECK(std::string(toString(e.kind())) == "EvalError");
      CHECK(std::string(e.what()).find("law 'Div'") != std::string::npos);
    }
  }

  TEST_CASE("classifyDeterminism") {
    CHECK(classifyDeterminism(*quantum::buildBundledModel("schrodinger_1d").model).deterministic);
    CHECK(classifyDeterminism(*quantum::buildBundledModel("counter").model).deterministic);
    for (const char* detector : {"off", "on"}) {
      auto v = classifyDeterminism(*quantum::buildBundledModel("double_slit", {{"detector", detector}}).model);
      CHECK_FALSE(v.deterministic);
      CHECK(std::find(v.laws.begin(), v.laws.end(), "Detect") != v.laws.end());
    }
  }

  TEST_CASE("property: guards are pure") {
    for (const char* name : {"overlap.cml", "partition.cml", "escaping.cml", "guard_true.cml", "swap.cml"}) {
      CAPTURE(name);
      auto m = compileFixture(name);
      RngStream sampler(deriveSeed(42, std::hash<std::string>{}(name) & 0xFFFF));
      for (int i = 0; i < 1000; ++i) {
        const SystemState s = sampleState(m->schema, sampler);
        const SystemState copy = s;
        RngStream probe(1);
        StreamRandomSource source(probe);
        for (const auto& l : m->laws) {
          EvalEnv env{m->schema.get(), &s, 1.0, &source, l.name, {}};
          evaluate(*l.guard, env);
        }
        REQUIRE(probe.counter() == 0);
        REQUIRE(deepEqual(s, copy, 0.0));
      }
    }
  }

  TEST_CASE("property: seeded step sequences repeat exactly") {
    auto m = compile(oneField("x: real in [-1.0, 1.0]",
                              law("Walk", "true", "x = x * 0.5 + random([-1.0, 1.0], FLAT) + random(GAUSS, 0.0, 0.1);")));
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      RngStream a(seed), b(seed);
      auto sa = stateWith(m, {{"x", Value::real(0)}});
      auto sb = sa;
      for (int k = 0; k < 1000; ++k) {
        sa = step(*m, sa, 0.1, a);
        sb = step(*m, sb, 0.1, b);
        REQUIRE(deepEqual(sa, sb, 0.0));
      }
    }
  }

  TEST_CASE("property: the swap fixture swaps every random pair") {
    auto m = compileFixture("swap.cml");
    RngStream gen(2024);
    for (int i = 0; i < 1000; ++i) {
      auto s = sampleState(m->schema, gen);
      auto out = step(*m, s, 1.0, gen);
      REQUIRE(out.value("a") == s.value("b"));
      REQUIRE(out.value("b") == s.value("a"));
    }
  }

  TEST_CASE("initial states come from init blocks or presets") {
    RngStream rng(0);
    auto swap = compileFixture("swap.cml");
    auto s = initialState(*swap, rng);
    CHECK(s.value("a").asInt() == 1);
    CHECK(s.value("b").asInt() == 2);
    auto noInit = compile(oneField("x: real", law("A", "true", "x = x;")));
    CHECK(testsupport::errorKind([&] { initialState(*noInit, rng); }) == "MissingField");
  }
}
