#include <doctest.h>

#include <filesystem>

#include "causal/analysis/analyzer.hpp"
#include "causal/quantum/bundled.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::analysis;
using testsupport::compile;
using testsupport::compileFixture;
using CK = ConsistencyVerdict::Kind;
using PK = CompletenessVerdict::Kind;

namespace {

SystemState withX(const ModelPtr& m, double x) { return makeInitialState(m->schema, {{"x", Value::real(x)}}); }

std::size_t applicableCount(const CausalModel& m, const SystemState& s) {
  std::size_t n = 0;
  for (const auto& law : m.laws) n += evalGuard(m, law, s, m.defaultTimestep);
  return n;
}

// Integer model over n in [0, 20]; `guards` are the law guards in order.
ModelPtr intModel(const std::vector<std::string>& guards) {
  std::string src = "model I {\n  state {\n    n: int in [0, 20];\n    up: bool;\n  }\n";
  for (std::size_t i = 0; i < guards.size(); ++i) {
    src += "  law L" + std::to_string(i) + " {\n    when " + guards[i] + ";\n    then {\n      up = !up;\n    }\n  }\n";
  }
  return compile(src + "}\n");
}

// Re-derives a sampled witness from its origin alone.
SystemState replaySample(const CausalModel& m, const WitnessOrigin& o) {
  RngStream rng(deriveSeed(o.seed, o.index));
  return sampleState(m.schema, rng);
}

}  // namespace

TEST_SUITE("analyzer") {
  TEST_CASE("validstate") {
    auto partition = compileFixture("partition.cml");
    RngStream rng(8);
    for (int i = 0; i < 1000; ++i) REQUIRE(validstate(*partition, sampleState(partition->schema, rng)));
    auto escaping = compileFixture("escaping.cml");
    CHECK_FALSE(validstate(*escaping, withX(escaping, 1.0)));
    auto always = compileFixture("guard_true.cml");
    for (int i = 0; i < 100; ++i) REQUIRE(validstate(*always, sampleState(always->schema, rng)));
  }

  TEST_CASE("consistency: partition passes, overlap fails with a replayable witness") {
    auto partition = compileFixture("partition.cml");
    auto pass = checkConsistency(*partition, CheckStrategy::sample(10000, 1));
    CHECK(pass.kind == CK::Pass);
    CHECK(pass.statesChecked == 10000);

    auto overlap = compileFixture("overlap.cml");
    auto fail = checkConsistency(*overlap, CheckStrategy::sample(10000, 1));
    REQUIRE(fail.kind == CK::Fail);
    const double x = fail.witness->value("x").asReal();
    CHECK(x > -1.0);
    CHECK(x < 1.0);
    CHECK(fail.laws == std::vector<std::string>{"Left", "Right"});
    CHECK(applicableCount(*overlap, *fail.witness) >= 2);
    CHECK(deepEqual(replaySample(*overlap, *fail.origin), *fail.witness, 0.0));
  }

  TEST_CASE("a single-law model is consistent") {
    auto escaping = compileFixture("escaping.cml");
    CHECK(checkConsistency(*escaping, CheckStrategy::sample(500, 3)).kind == CK::Pass);
  }

  TEST_CASE("completeness verdicts") {
    CHECK(checkCompleteness(*compileFixture("guard_true.cml"), CheckStrategy::sample(100, 0)).kind == PK::PassTrivially);
    CHECK(checkCompleteness(*compileFixture("partition.cml"), CheckStrategy::sample(10000, 0)).kind == PK::PassBounded);

    auto escaping = compileFixture("escaping.cml");
    auto v = checkCompleteness(*escaping, CheckStrategy::sample(1000, 5));
    REQUIRE(v.kind == PK::Fail);
    const double in = v.inState->value("x").asReal();
    const double out = v.witness->value("x").asReal();
    CHECK(in >= -1.0);
    CHECK(in < 0.0);
    CHECK(out >= 0.0);
    CHECK(out < 1.0);
    CHECK(out == in + 1.0);
    CHECK_FALSE(validstate(*escaping, *v.witness));
    CHECK(v.law == "Up");
    CHECK(deepEqual(replaySample(*escaping, *v.origin), *v.inState, 0.0));
  }

  TEST_CASE("completeness needs at least one valid in-state") {
    auto never = intModel({"n > 100"});
    CHECK(testsupport::errorKind([&] { checkCompleteness(*never, CheckStrategy::sample(200, 0)); }) ==
          "NoValidInStateFound");
    auto report = analyze(*never, CheckStrategy::sample(200, 0));
    CHECK(report.completeness.kind == PK::Error);
    CHECK(report.completeness.error.find("NoValidInStateFound") != std::string::npos);
  }

  TEST_CASE("halted out-states end their lineage") {
    auto counter = quantum::buildBundledModel("counter").model;
    auto report = analyze(*counter, CheckStrategy::sample(500, 0));
    CHECK(report.completeness.kind == PK::PassTrivially);
    auto bounded = compile("model B {\n  state {\n    n: int in [0, 10];\n  }\n  halt when n >= 10;\n"
                           "  law Inc {\n    when n < 10;\n    then {\n      n = n + 1;\n    }\n  }\n}\n");
    CHECK(checkCompleteness(*bounded, CheckStrategy::enumerate()).kind == PK::PassBounded);
  }

  TEST_CASE("enumerate covers finite models exactly") {
    auto partition = intModel({"n < 10", "n >= 10"});
    auto v = checkConsistency(*partition, CheckStrategy::enumerate());
    CHECK(v.kind == CK::Pass);
    CHECK(v.statesChecked == 21 * 2);
    auto overlap = intModel({"n <= 10", "n >= 10"});
    auto f = checkConsistency(*overlap, CheckStrategy::enumerate());
    REQUIRE(f.kind == CK::Fail);
    CHECK(f.witness->value("n").asInt() == 10);
  }

  TEST_CASE("property: enumerate passing implies sample passing") {
    RngStream gen(314);
    for (int trial = 0; trial < 40; ++trial) {
      const auto cut = std::to_string(gen.nextBelow(21));
      const auto lo = std::to_string(gen.nextBelow(21));
      std::vector<std::string> guards = {"n < " + cut, "n >= " + cut};
      if (gen.nextBelow(2) == 1) guards = {"n < " + lo, "n >= " + lo + " && n < " + cut, "n >= " + cut + " && n >= " + lo};
      auto m = intModel(guards);
      const bool exhaustive = checkConsistency(*m, CheckStrategy::enumerate()).kind == CK::Pass;
      if (!exhaustive) continue;
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CHECK(checkConsistency(*m, CheckStrategy::sample(300, seed)).kind == CK::Pass);
      }
    }
  }

  TEST_CASE("analyze on bundled models") {
    auto harmonic = quantum::buildBundledModel("harmonic_oscillator").model;
    auto h = analyze(*harmonic, CheckStrategy::sample(50, 0));
    CHECK(h.consistency.kind == CK::Pass);
    CHECK(h.completeness.kind == PK::PassTrivially);
    CHECK(h.determinism.deterministic);
    CHECK(h.realityConformance == "NotMachineCheckable");

    auto slit = quantum::buildBundledModel("double_slit").model;
    auto d = analyze(*slit, CheckStrategy::sample(50, 0));
    CHECK_FALSE(d.determinism.deterministic);
    CHECK(d.determinism.laws == std::vector<std::string>{"Detect"});
  }

  TEST_CASE("unsampleable fields downgrade sample to trace") {
    auto schrodinger = quantum::buildBundledModel("schrodinger_1d").model;
    auto r = analyze(*schrodinger, CheckStrategy::sample(100, 0));
    CHECK(toString(r.requested.kind) == "sample");
    CHECK(toString(r.used.kind) == "trace");
    REQUIRE(r.downgrades.size() == 1);
    CHECK(r.computability.unsampleableFields == std::vector<std::string>{"psi"});
    CHECK(r.consistency.kind == CK::Pass);
    CHECK(r.consistency.statesChecked > 0);
  }

  TEST_CASE("enumerate on continuous domains falls back to sample") {
    auto r = analyze(*compileFixture("partition.cml"), CheckStrategy::enumerate());
    CHECK(toString(r.used.kind) == "sample");
    CHECK(r.downgrades.size() == 1);
  }

  TEST_CASE("trace strategy finds the overlap when a run enters it") {
    auto overlap = compileFixture("overlap.cml");
    auto v = checkConsistency(*overlap, CheckStrategy::trace(5, 10, 2));
    REQUIRE(v.kind == CK::Fail);
    CHECK(toString(v.origin->strategy) == "trace");
    CHECK(applicableCount(*overlap, *v.witness) >= 2);
  }

  TEST_CASE("report JSON carries verdicts, witness and origin") {
    auto j = toJson(analyze(*compileFixture("overlap.cml"), CheckStrategy::sample(10000, 1)));
    CHECK(j["model"] == "overlap");
    CHECK(j["consistency"]["verdict"] == "Fail");
    CHECK(j["consistency"]["witness"]["fields"].contains("x"));
    CHECK(j["consistency"]["origin"]["seed"] == 1);
    CHECK(j["determinism"]["verdict"] == "Deterministic");
    CHECK(j["realityConformance"] == "NotMachineCheckable");
    CHECK(j.contains("computabilityNotes"));
  }

  TEST_CASE("analyze never throws on corpus models") {
    std::vector<ModelPtr> models;
    for (const auto& entry : std::filesystem::directory_iterator(testsupport::sourcePath("fixtures"))) {
      if (entry.path().extension() != ".cml") continue;
      auto r = cml::compileModel(testsupport::readFile(entry.path().string()));
      if (r.model) models.push_back(r.model);
    }
    for (const auto& name : quantum::bundledModelNames()) models.push_back(quantum::buildBundledModel(name).model);
    for (const auto& m : models) {
      CAPTURE(m->name);
      for (auto strategy : {CheckStrategy::sample(200, 0), CheckStrategy::enumerate(), CheckStrategy::trace(3, 20, 0)}) {
        CHECK_NOTHROW(analyze(*m, strategy));
      }
    }
  }
}
