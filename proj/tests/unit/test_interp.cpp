#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "causal/interp/branch.hpp"
#include "causal/interp/interpreter.hpp"
#include "causal/quantum/bundled.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::interp;
using testsupport::compile;
using testsupport::compileFixture;

namespace {

std::string serialize(const Trace& t, TraceFormat f) {
  std::ostringstream os;
  writeTrace(t, f, os);
  return os.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

SystemState initOf(const ModelPtr& m) {
  RngStream rng(0);
  return initialState(*m, rng);
}

double sumWeights(const WorldTree& tree, const std::vector<std::size_t>& ids) {
  double s = 0.0;
  for (auto id : ids) s += tree.nodes[id].weight;
  return s;
}

}  // namespace

TEST_SUITE("interpreter") {
  TEST_CASE("counter halts at n = 10 after exactly 10 uniform steps") {
    auto b = quantum::buildBundledModel("counter");
    RunConfig cfg;
    cfg.observables = {"n"};
    auto t = run(*b.model, b.init, cfg);
    CHECK(toString(t.termination.kind) == "Halted");
    CHECK(t.steps == 10);
    CHECK(t.finalState->value("n").asInt() == 10);
    REQUIRE(t.rows.size() == 11);
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      CHECK(t.rows[k].step == k);
      CHECK(t.rows[k].time == static_cast<double>(k) * cfg.dt);
    }
  }

  TEST_CASE("a gap ends the run with NoApplicableLaw and the witness") {
    auto m = compile("model G {\n  state {\n    x: real;\n  }\n  init {\n    x = 2.0;\n  }\n"
                     "  law Neg {\n    when x < 0.0;\n    then {\n      x = x;\n    }\n  }\n}\n");
    auto t = run(*m, initOf(m), RunConfig{});
    CHECK(toString(t.termination.kind) == "NoApplicableLaw");
    REQUIRE(t.termination.witness);
    CHECK(t.termination.witness->value("x").asReal() == 2.0);
    CHECK(t.steps == 0);
  }

  TEST_CASE("strict mode reports overlaps, first-match runs through them") {
    auto m = compileFixture("overlap.cml");
    auto s = makeInitialState(m->schema, {{"x", Value::real(0.0)}});
    RunConfig cfg;
    cfg.maxSteps = 3;
    auto strict = run(*m, s, cfg);
    CHECK(toString(strict.termination.kind) == "MultipleApplicable");
    CHECK(strict.termination.laws == std::vector<std::string>{"Left", "Right"});
    cfg.mode = SelectionMode::FirstMatch;
    auto loose = run(*m, s, cfg);
    CHECK(toString(loose.termination.kind) == "MaxSteps");
    CHECK(loose.finalState->value("x").asReal() == -1.5);
  }

  TEST_CASE("same model and seed give byte-identical traces") {
    auto m = compileFixture("two_coins.cml");
    RunConfig cfg;
    cfg.seed = 1234;
    cfg.observables = {"a", "b", "2 * a + b"};
    auto first = run(*m, initOf(m), cfg);
    auto second = run(*m, initOf(m), cfg);
    CHECK(serialize(first, TraceFormat::Csv) == serialize(second, TraceFormat::Csv));
    CHECK(serialize(first, TraceFormat::Jsonl) == serialize(second, TraceFormat::Jsonl));
  }

  TEST_CASE("writeTrace line counts and the JSONL meta line") {
    auto b = quantum::buildBundledModel("counter");
    RunConfig cfg;
    cfg.maxSteps = 2;
    cfg.observables = {"n"};
    auto t = run(*b.model, b.init, cfg);
    REQUIRE(t.rows.size() == 3);
    auto csv = lines(serialize(t, TraceFormat::Csv));
    CHECK(csv.size() == 4);
    CHECK(csv[0] == "step,time,n");

    cfg.observables.clear();
    auto bare = lines(serialize(run(*b.model, b.init, cfg), TraceFormat::Csv));
    CHECK(bare[0] == "step,time");

    auto jsonl = lines(serialize(t, TraceFormat::Jsonl));
    CHECK(jsonl.size() == 4);
    CHECK(jsonl.back().find("\"terminationReason\"") != std::string::npos);
  }

  TEST_CASE("writeTrace returns the byte count and reports a failed sink") {
    auto b = quantum::buildBundledModel("counter");
    auto t = run(*b.model, b.init, RunConfig{});
    std::ostringstream os;
    const auto bytes = writeTrace(t, TraceFormat::Csv, os);
    CHECK(bytes == os.str().size());
    std::ostringstream broken;
    broken.setstate(std::ios::badbit);
    CHECK(testsupport::errorKind([&] { writeTrace(t, TraceFormat::Csv, broken); }) == "SinkError");
  }

  TEST_CASE("recordEvery keeps every n-th row with exact times") {
    auto b = quantum::buildBundledModel("free_particle");
    RunConfig cfg;
    cfg.dt = 0.1;
    cfg.maxSteps = 1000;
    cfg.recordEvery = 7;
    auto t = run(*b.model, b.init, cfg);
    CHECK(toString(t.termination.kind) == "MaxSteps");
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      CHECK(t.rows[i].step == 7 * i);
      CHECK(t.rows[i].time == static_cast<double>(7 * i) * 0.1);
      CHECK(t.rows[i].time > t.rows[i - 1].time);
    }
  }

  TEST_CASE("bad configs and mismatched initial states are rejected") {
    auto b = quantum::buildBundledModel("counter");
    RunConfig cfg;
    cfg.dt = -1.0;
    CHECK(testsupport::errorKind([&] { run(*b.model, b.init, cfg); }) == "InvalidArgument");
    cfg = RunConfig{};
    cfg.recordEvery = 0;
    CHECK(testsupport::errorKind([&] { run(*b.model, b.init, cfg); }) == "InvalidArgument");
    cfg = RunConfig{};
    cfg.observables = {"nope"};
    CHECK(testsupport::errorKind([&] { run(*b.model, b.init, cfg); }) == "UnknownObservable");
    auto other = compileFixture("swap.cml");
    CHECK(testsupport::errorKind([&] { run(*b.model, initOf(other), RunConfig{}); }) == "SchemaMismatch");
  }
}

TEST_SUITE("branching") {
  TEST_CASE("a deterministic model is a single lineage of weight 1") {
    auto b = quantum::buildBundledModel("counter");
    auto tree = branchRun(*b.model, b.init, RunConfig{}, 4, 16);
    CHECK(tree.nodes.size() == 1);
    CHECK(tree.leaves().size() == 1);
    CHECK(tree.nodes[0].weight == 1.0);
    CHECK(tree.nodes[0].state.value("n").asInt() == 10);
    CHECK(toString(tree.nodes[0].termination->kind) == "Halted");
  }

  TEST_CASE("PSI(0.6, 0.8i) forks into leaves weighted 0.36 and 0.64") {
    auto m = compileFixture("psi_draw.cml");
    auto tree = branchRun(*m, initOf(m), RunConfig{}, 4, 16);
    auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 2);
    std::map<std::int64_t, double> byOutcome;
    for (auto id : leaves) byOutcome[tree.nodes[id].state.value("c").asInt()] = tree.nodes[id].weight;
    CHECK(std::abs(byOutcome[0] - 0.36) < 1e-12);
    CHECK(std::abs(byOutcome[1] - 0.64) < 1e-12);
    CHECK(tree.nodes[0].law == "Draw");
  }

  TEST_CASE("two fair draws give four leaves of 1/4") {
    auto m = compileFixture("two_coins.cml");
    auto tree = branchRun(*m, initOf(m), RunConfig{}, 2, 16);
    auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 4);
    std::set<std::pair<std::int64_t, std::int64_t>> outcomes;
    for (auto id : leaves) {
      CHECK(std::abs(tree.nodes[id].weight - 0.25) < 1e-12);
      CHECK(tree.nodes[id].draws == 2);
      outcomes.emplace(tree.nodes[id].state.value("a").asInt(), tree.nodes[id].state.value("b").asInt());
    }
    CHECK(outcomes.size() == 4);
    CHECK(std::abs(tree.leafWeight() + tree.prunedMass - 1.0) < 1e-12);
  }

  TEST_CASE("depth and width bounds") {
    auto m = compileFixture("two_coins.cml");
    auto shallow = branchRun(*m, initOf(m), RunConfig{}, 1, 16);
    for (auto id : shallow.leaves()) CHECK(toString(shallow.nodes[id].termination->kind) == "DepthBound");
    CHECK(std::abs(shallow.leafWeight() - 1.0) < 1e-12);

    auto narrow = branchRun(*m, initOf(m), RunConfig{}, 2, 3);
    CHECK(narrow.prunedMass > 0.0);
    CHECK(std::abs(narrow.leafWeight() + narrow.prunedMass - 1.0) < 1e-12);
  }

  TEST_CASE("property: children's weights sum to the parent and totals conserve mass") {
    for (const char* name : {"psi_draw.cml", "two_coins.cml"}) {
      auto m = compileFixture(name);
      for (std::size_t width : {1u, 2u, 3u, 5u, 64u}) {
        auto tree = branchRun(*m, initOf(m), RunConfig{}, 4, width);
        CHECK(tree.nodes[0].weight == 1.0);
        for (const auto& n : tree.nodes) {
          if (n.children.empty()) continue;
          CHECK(std::abs(sumWeights(tree, n.children) - n.weight) < 1e-12);
        }
        CHECK(std::abs(tree.leafWeight() + tree.prunedMass - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("entangled pair branches into two anti-correlated worlds") {
    auto b = quantum::buildBundledModel("entangled_pair");
    auto tree = branchRun(*b.model, b.init, RunConfig{}, 4, 16);
    auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 2);
    for (auto id : leaves) {
      const auto& s = tree.nodes[id].state;
      CHECK(s.value("spin1").asInt() == -s.value("spin2").asInt());
      CHECK(std::abs(tree.nodes[id].weight - 0.5) < 1e-12);
    }
  }

  TEST_CASE("continuous draws cannot be branched") {
    auto m = compile("model C {\n  state {\n    x: real;\n  }\n  init {\n    x = 0.0;\n  }\n"
                     "  law Jitter {\n    when true;\n    then {\n      x = random([0.0, 1.0], FLAT);\n    }\n  }\n}\n");
    try {
      branchRun(*m, initOf(m), RunConfig{}, 4, 16);
      FAIL("expected ContinuousRandomNotBranchable");
    } catch (const Error& e) {
      CHECK(std::string(toString(e.kind())) == "ContinuousRandomNotBranchable");
      CHECK(e.subject() == "Jitter");
    }
  }

  TEST_CASE("Monte Carlo marginals agree with leaf weights") {
    auto m = compileFixture("psi_draw.cml");
    auto init = initOf(m);
    const int n = 10000;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      RunConfig cfg;
      cfg.seed = deriveSeed(5, static_cast<std::uint64_t>(i));
      ones += run(*m, init, cfg).finalState->value("c").asInt();
    }
    CHECK(std::abs(ones / double(n) - 0.64) < 3 * testsupport::binomialSigma(0.64, n));
  }

  TEST_CASE("tree JSON nests children") {
    auto m = compileFixture("two_coins.cml");
    auto j = toJson(branchRun(*m, initOf(m), RunConfig{}, 2, 16), false);
    CHECK(j["leafCount"] == 4);
    const auto& root = j["root"];
    CHECK(root["weight"] == 1.0);
    REQUIRE(root["children"].size() == 2);
    CHECK(root["children"][0]["children"].size() == 2);
  }
}
