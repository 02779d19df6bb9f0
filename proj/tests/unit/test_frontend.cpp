#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "causal/cml/parser.hpp"
#include "causal/cml/printer.hpp"
#include "causal/cml/typecheck.hpp"
#include "causal/engine/engine.hpp"
#include "causal/quantum/bundled.hpp"
#include "causal/quantum/intrinsics.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::cml;
namespace fs = std::filesystem;

namespace {

std::vector<Diagnostic> diagnosticsOf(const std::string& source) { return compileModel(source).diagnostics; }

bool hasCode(const std::vector<Diagnostic>& diags, const std::string& code) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::string withLaws(const std::string& state, const std::string& laws, const std::string& extra = "") {
  return "model T {\n" + extra + "  state {\n" + state + "  }\n" + laws + "}\n";
}

std::string law(const std::string& name, const std::string& guard, const std::string& body) {
  return "  law " + name + " {\n    when " + guard + ";\n    then {\n      " + body + "\n    }\n  }\n";
}

std::vector<fs::path> cmlFiles(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(testsupport::sourcePath(dir))) {
    if (entry.path().extension() == ".cml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Well-formed sources: every fixture, every bundled model.
std::vector<std::pair<std::string, std::string>> validCorpus() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : cmlFiles("fixtures")) {
    if (f.stem() != "syntax_error") out.emplace_back(f.filename().string(), testsupport::readFile(f.string()));
  }
  for (const auto& name : quantum::bundledModelNames()) out.emplace_back(name, quantum::bundledSource(name));
  out.emplace_back("double_slit on", quantum::bundledSource("double_slit", {{"detector", "on"}}));
  return out;
}

}  // namespace

TEST_SUITE("cml-frontend") {
  TEST_CASE("minimal model parses to one law named Inc") {
    auto r = parse("model M { state { n: int in [0,100]; } init { n = 0; } law Inc { when true; then { n = n + 1; } } }");
    REQUIRE(r.ast);
    CHECK(r.diagnostics.empty());
    REQUIRE(r.ast->laws.size() == 1);
    CHECK(r.ast->laws[0].name == "Inc");
  }

  TEST_CASE("missing ';' after a guard is reported at the then token") {
    const std::string src = "model M {\n  state { x: real; }\n  law L { when x < 0 then { } }\n}\n";
    auto r = parse(src);
    CHECK_FALSE(r.ast);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].loc.line == 3);
    CHECK(r.diagnostics[0].loc.column == 22);
  }

  TEST_CASE("the syntax-error fixture fails at 3:17") {
    auto diags = diagnosticsOf(testsupport::readFile(testsupport::sourcePath("fixtures/syntax_error.cml")));
    REQUIRE_FALSE(diags.empty());
    CHECK(format(diags[0], "fixtures/syntax_error.cml").rfind("fixtures/syntax_error.cml:3:17: ", 0) == 0);
  }

  TEST_CASE("guard typing") {
    const std::string state = "    n: int in [0, 100];\n";
    CHECK(compileModel(withLaws(state, law("A", "n < 100", "n = n + 1;"))).model);
    CHECK(hasCode(diagnosticsOf(withLaws(state, law("A", "n + 1", "n = n;"))), "TypeMismatch"));
    CHECK(hasCode(diagnosticsOf(withLaws("    x: real;\n", law("A", "random([0.0, 1.0], FLAT) < 0.5", "x = x;"))),
                  "RandomInGuard"));
  }

  TEST_CASE("random is rejected in halt and outcome expressions") {
    const std::string src = "model T {\n  state {\n    x: real;\n  }\n  halt when random([0.0, 1.0], FLAT) < 0.5;\n" +
                            law("A", "true", "x = x;") + "}\n";
    CHECK(hasCode(diagnosticsOf(src), "RandomNotAllowed"));
  }

  TEST_CASE("lowering marks exactly the laws that draw") {
    const std::string state = "    x: real;\n";
    auto model = testsupport::compile(withLaws(state, law("A", "x < 0.0", "x = x;") +
                                                          law("B", "x >= 0.0 && x < 1.0", "x = random([0.0, 1.0], FLAT);") +
                                                          law("C", "x >= 1.0", "x = x - 1.0;")));
    REQUIRE(model->laws.size() == 3);
    CHECK(model->laws[0].name == "A");
    CHECK(model->laws[1].name == "B");
    CHECK(model->laws[2].name == "C");
    CHECK_FALSE(model->laws[0].usesRandom);
    CHECK(model->laws[1].usesRandom);
    CHECK_FALSE(model->laws[2].usesRandom);
  }

  TEST_CASE("deterministic and stochastic intrinsics") {
    auto schrodinger = quantum::buildBundledModel("schrodinger_1d").model;
    CHECK_FALSE(schrodinger->laws[0].usesRandom);
    CHECK(schrodinger->laws[0].intrinsics == std::vector<std::string>{"schrodinger_step"});
    auto pair = quantum::buildBundledModel("entangled_pair").model;
    CHECK(pair->findLaw("Measure")->usesRandom);
    CHECK_FALSE(pair->findLaw("Record")->usesRandom);
  }

  TEST_CASE("constants fold and params override them") {
    const std::string src = withLaws("    x: real;\n", law("A", "true", "x = c;"), "  const a: real = 2.0;\n  const c: real = a * 3.0;\n");
    auto model = testsupport::compile(src);
    CHECK(model->schema->constantValues[1].asReal() == 6.0);
    auto overridden = testsupport::compile(src, {{"a", "0.5"}});
    CHECK(overridden->schema->constantValues[1].asReal() == 1.5);
    CHECK(testsupport::errorKind([&] { compileModel(src, {{"nope", "1"}}); }) == "BadParam");
    CHECK(testsupport::errorKind([&] { compileModel(src, {{"a", "1 +"}}); }) == "BadParam");
  }

  TEST_CASE("typecheck diagnostics by code") {
    const std::string s = "    x: real;\n    n: int in [0, 3];\n";
    auto ok = law("A", "true", "x = x;");
    const std::vector<std::pair<std::string, std::string>> cases = {
        {withLaws(s, law("A", "true", "y = 1.0;")), "UnknownName"},
        {withLaws("    x: matrix;\n", ok), "UnknownType"},
        {withLaws(s, law("A", "true", "x = frob(x);")), "UnknownIntrinsic"},
        {withLaws(s, law("A", "true", "x = random([0.0, 1.0], LEVY);")), "UnknownDistribution"},
        {withLaws(s, law("A", "true", "n = 1.5;")), "TypeMismatch"},
        {withLaws(s, law("A", "true", "c = 1.0;"), "  const c: real = 1.0;\n"), "AssignToConstant"},
        {withLaws(s, law("A", "true", "dt = 1.0;")), "AssignToConstant"},
        {withLaws(s, law("A", "true", "x + 1.0 = x;")), "SyntaxError"},
        {withLaws(s, ok + ok), "DuplicateName"},
        {withLaws("    dt: real;\n", ok), "ReservedName"},
        {withLaws(s, law("A", "true", "x = exp(x, x);")), "ArityMismatch"},
        {withLaws(s, ""), "NoLaws"},
        {withLaws(s, ok, "  timestep 0.0;\n"), "BadTimestep"},
        {withLaws(s, ok, "  const k: real = 1.0 / 0.0;\n"), "ConstEvalError"},
    };
    for (const auto& [src, code] : cases) {
      auto diags = diagnosticsOf(src);
      std::string got;
      for (const auto& d : diags) got += d.code + " ";
      CHECK_MESSAGE(hasCode(diags, code), "expected " << code << ", got " << got << "\n" << src);
    }
  }

  TEST_CASE("round trip: printed sources reparse to the same tree") {
    for (const auto& [name, src] : validCorpus()) {
      CAPTURE(name);
      auto first = parse(src);
      REQUIRE(first.ast);
      const std::string printed = prettyPrint(*first.ast);
      auto second = parse(printed);
      REQUIRE_MESSAGE(second.ast, printed);
      CHECK(dumpTree(*first.ast) == dumpTree(*second.ast));
      CHECK(prettyPrint(*second.ast) == printed);
    }
  }

  TEST_CASE("every valid corpus source typechecks") {
    for (const auto& [name, src] : validCorpus()) {
      CAPTURE(name);
      auto result = compileModel(src);
      CHECK(result.model);
      CHECK_FALSE(hasErrors(result.diagnostics));
    }
  }

  TEST_CASE("broken corpus: 20+ files, every one rejected with a located diagnostic") {
    auto files = cmlFiles("fixtures/broken");
    CHECK(files.size() >= 20);
    for (const auto& f : files) {
      CAPTURE(f.filename().string());
      const std::string src = testsupport::readFile(f.string());
      CompileResult result;
      CHECK_NOTHROW(result = compileModel(src));
      CHECK_FALSE(result.model);
      REQUIRE_FALSE(result.diagnostics.empty());
      int lines = static_cast<int>(std::count(src.begin(), src.end(), '\n')) + 1;
      for (const auto& d : result.diagnostics) {
        CHECK(d.loc.valid());
        CHECK(d.loc.line <= lines);
      }
    }
  }

  TEST_CASE("observables compile against a model and reject unknown names") {
    auto model = testsupport::compileFixture("swap.cml");
    auto obs = compileObservable(*model, "a + 2 * b");
    RngStream rng(0);
    auto s = initialState(*model, rng);
    CHECK(evalObservable(*model, obs, s, 1.0).asInt() == 5);
    CHECK(testsupport::errorKind([&] { compileObservable(*model, "zz"); }) == "UnknownObservable");
    CHECK(testsupport::errorKind([&] { compileObservable(*model, "random({0, 1}, FLAT)"); }) == "UnknownObservable");
  }
}
