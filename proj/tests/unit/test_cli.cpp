#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "causal/cli/cli.hpp"
#include "causal/quantum/bundled.hpp"
#include "support.hpp"

using namespace causal;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = cli::main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string fixture(const std::string& name) { return testsupport::sourcePath("fixtures/" + name); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run builtin:counter writes a csv ending at n = 10") {
    auto r = invoke({"run", "builtin:counter", "--steps", "10", "--dt", "1", "--seed", "7"});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 12);
    CHECK(rows.front() == "step,time,n");
    CHECK(rows.back() == "10,10,10");
  }

  TEST_CASE("run with jsonl and explicit observables") {
    auto r = invoke({"run", "builtin:counter", "--format", "jsonl", "--observables", "n,n*2", "--record-every", "5"});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    auto last = nlohmann::json::parse(rows[2]);
    CHECK(last["step"] == 10);
    CHECK(nlohmann::json::parse(rows.back()).contains("terminationReason"));
  }

  TEST_CASE("analyze reports the overlap as data and exits 0") {
    auto r = invoke({"analyze", fixture("overlap.cml"), "--strategy", "sample", "--samples", "10000", "--seed", "1"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["consistency"]["verdict"] == "Fail");
    CHECK(j["consistency"].contains("witness"));
  }

  TEST_CASE("a syntax error is located and exits 1") {
    const std::string path = fixture("syntax_error.cml");
    auto r = invoke({"run", path});
    CHECK(r.code == 1);
    CHECK(r.err.rfind(path + ":3:17: ", 0) == 0);
  }

  TEST_CASE("every broken fixture exits 1 with file:line:col diagnostics") {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(testsupport::sourcePath("fixtures/broken"))) {
      const std::string path = entry.path().string();
      CAPTURE(path);
      for (const char* command : {"run", "analyze", "branch"}) {
        auto r = invoke({command, path});
        CHECK(r.code == 1);
        CHECK(r.err.rfind(path + ":", 0) == 0);
      }
      ++count;
    }
    CHECK(count >= 20);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"run"}).code == 2);
    CHECK(invoke({"run", "builtin:counter", "--steps", "ten"}).code == 2);
    CHECK(invoke({"run", "builtin:counter", "--mode", "sideways"}).code == 2);
    CHECK(invoke({"analyze", "builtin:counter", "--strategy", "guess"}).code == 2);
    CHECK(invoke({"run", "builtin:counter", "--param", "novalue"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
  }

  TEST_CASE("model errors exit 1") {
    CHECK(invoke({"run", "builtin:nope"}).code == 1);
    CHECK(invoke({"run", fixture("does_not_exist.cml")}).code == 1);
    CHECK(invoke({"run", "builtin:counter", "--observables", "zz"}).code == 1);
    CHECK(invoke({"run", "builtin:double_slit", "--param", "detector=maybe"}).code == 1);
  }

  TEST_CASE("list-models names every bundled model") {
    auto r = invoke({"list-models"});
    CHECK(r.code == 0);
    for (const auto& name : quantum::bundledModelNames()) CHECK(r.out.find("builtin:" + name) != std::string::npos);
  }

  TEST_CASE("branch writes the world tree") {
    auto r = invoke({"branch", fixture("psi_draw.cml")});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["leafCount"] == 2);
    CHECK(std::abs(j["leafWeight"].get<double>() - 1.0) < 1e-12);
  }

  TEST_CASE("histogram with one trial has one nonzero bin") {
    auto r = invoke({"histogram", "builtin:double_slit", "--trials", "1", "--seed", "3"});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() > 2);
    int nonzero = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      std::istringstream row(rows[i]);
      std::string bin, count;
      std::getline(row, bin, ',');
      std::getline(row, count, ',');
      if (count != "0") {
        ++nonzero;
        CHECK(count == "1");
      }
    }
    CHECK(nonzero == 1);
  }

  TEST_CASE("histogram frequencies sum to one") {
    for (const char* detector : {"on", "off"}) {
      auto b = quantum::buildBundledModel("double_slit", {{"detector", detector}});
      auto h = cli::histogram(*b.model, b.init, "bin", 2000, 9, 0, interp::RunConfig{});
      double total = 0.0;
      std::size_t count = 0;
      for (const auto& bin : h.bins) {
        total += bin.frequency;
        count += bin.count;
      }
      CHECK(count == 2000);
      CHECK(std::abs(total - 1.0) < 1e-12);
      CHECK(h.samples.size() == 2000);
    }
    auto coins = testsupport::compileFixture("two_coins.cml");
    RngStream rng(0);
    auto h = cli::histogram(*coins, initialState(*coins, rng), "2 * a + b", 4000, 1, 0, interp::RunConfig{});
    REQUIRE(h.bins.size() == 4);
    for (const auto& bin : h.bins) CHECK(std::abs(bin.frequency - 0.25) < 4 * testsupport::binomialSigma(0.25, 4000));
  }

  TEST_CASE("identical argv gives byte-identical output") {
    const std::vector<std::vector<std::string>> commands = {
        {"run", fixture("two_coins.cml"), "--seed", "42"},
        {"analyze", fixture("partition.cml"), "--seed", "42", "--samples", "500"},
        {"branch", fixture("two_coins.cml")},
        {"histogram", "builtin:double_slit", "--trials", "300", "--seed", "42"},
        {"run", "builtin:schrodinger_1d", "--steps", "3", "--format", "jsonl"},
    };
    for (const auto& args : commands) {
      CAPTURE(args[0]);
      auto first = invoke(args);
      auto second = invoke(args);
      CHECK(first.code == 0);
      CHECK(first.out == second.out);
      CHECK_FALSE(first.out.empty());
    }
  }

  TEST_CASE("--out writes to a file and reports unwritable sinks") {
    const auto path = std::filesystem::temp_directory_path() / "causal_cli_out.csv";
    auto r = invoke({"run", "builtin:counter", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(lines(testsupport::readFile(path.string())).size() == 12);
    std::filesystem::remove(path);
    CHECK(invoke({"run", "builtin:counter", "--out", "/nonexistent/dir/x.csv"}).code == 1);
  }

  TEST_CASE("every bundled model runs with default flags") {
    for (const auto& name : quantum::bundledModelNames()) {
      CAPTURE(name);
      auto r = invoke({"run", "builtin:" + name, "--steps", "50"});
      CHECK(r.code == 0);
      CHECK(r.err.empty());
    }
  }
}
