#include <doctest.h>

#include <cmath>
#include <complex>
#include <json.hpp>

#include "causal/engine/random.hpp"
#include "causal/engine/rng.hpp"
#include "causal/error.hpp"
#include "support.hpp"

using namespace causal;

namespace {

std::uint64_t u64(const nlohmann::json& j) { return std::stoull(j.get<std::string>()); }

nlohmann::json vectors() { return nlohmann::json::parse(testsupport::readFile(testsupport::sourcePath("tests/fixtures/rng_vectors.json"))); }

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("streams reproduce the committed SplitMix64 vectors") {
    const auto v = vectors();
    for (const auto& stream : v["splitmix64"]) {
      RngStream rng(u64(stream["seed"]));
      for (const auto& expected : stream["u64"]) CHECK(rng.nextU64() == u64(expected));
    }
  }

  TEST_CASE("first output for seed 0 is the published SplitMix64 value") {
    RngStream rng(0);
    CHECK(rng.nextU64() == 0xE220A8397B1DCDAFULL);
  }

  TEST_CASE("deriveSeed matches the committed vectors") {
    for (const auto& d : vectors()["deriveSeed"]) {
      CHECK(deriveSeed(u64(d["base"]), u64(d["index"])) == u64(d["seed"]));
    }
  }

  TEST_CASE("nextDouble takes the top 53 bits") {
    const auto v = vectors()["nextDouble"];
    RngStream rng(u64(v["seed"]));
    for (const auto& expected : v["values"]) CHECK(rng.nextDouble() == std::stod(expected.get<std::string>()));
  }

  TEST_CASE("nextBelow stays in range and is roughly uniform") {
    RngStream rng(5);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
      auto k = rng.nextBelow(7);
      REQUIRE(k < 7);
      ++counts[k];
    }
    const double sigma = testsupport::binomialSigma(1.0 / 7.0, n) * n;
    for (int c : counts) CHECK(std::abs(c - n / 7.0) < 4 * sigma);
  }
}

TEST_SUITE("random") {
  TEST_CASE("FLAT over [0,1) has mean 0.5") {
    RngStream rng(1);
    auto spec = RandomSpec::flat(0.0, 1.0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double x = sampleRandom(spec, rng).asReal();
      REQUIRE(x >= 0.0);
      REQUIRE(x < 1.0);
      sum += x;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
  }

  TEST_CASE("GAUSS matches its mean and sigma") {
    RngStream rng(2);
    auto spec = RandomSpec::gauss(3.0, 2.0);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sampleRandom(spec, rng).asReal();
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean - 3.0) < 4 * 2.0 / std::sqrt(n));
    CHECK(std::abs(sd - 2.0) < 0.03);
  }

  TEST_CASE("PSI(0.6, 0.8i) gives Born frequencies 0.36 and 0.64") {
    auto spec = RandomSpec::psi({Value::integer(0), Value::integer(1)}, {{0.6, 0.0}, {0.0, 0.8}});
    auto p = categoricalProbabilities(spec);
    CHECK(p[0] == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.64).epsilon(1e-15));
    RngStream rng(9);
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += sampleRandom(spec, rng).asInt() == 1;
    CHECK(std::abs(ones / double(n) - 0.64) < 3 * testsupport::binomialSigma(0.64, n));
  }

  TEST_CASE("WEIGHTS(1, 0) always yields the first value; WEIGHTS(0, 0) is an error") {
    RngStream rng(4);
    auto certain = RandomSpec::weighted({Value::integer(0), Value::integer(1)}, {1.0, 0.0});
    for (int i = 0; i < 1000; ++i) REQUIRE(sampleRandom(certain, rng).asInt() == 0);
    auto none = RandomSpec::weighted({Value::integer(0), Value::integer(1)}, {0.0, 0.0});
    CHECK_THROWS_AS(none.validate(), Error);
    CHECK(testsupport::errorKind([&] { sampleRandom(none, rng); }) == "RandomError");
  }

  TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(RandomSpec::gauss(0.0, 0.0).validate(), Error);
    CHECK_THROWS_AS(RandomSpec::flat(1.0, 1.0).validate(), Error);
    CHECK_THROWS_AS(RandomSpec::psi({Value::integer(0)}, {{1, 0}, {0, 1}}).validate(), Error);
    CHECK_THROWS_AS(RandomSpec::flatOver({}).validate(), Error);
  }

  TEST_CASE("property: PSI probabilities are invariant under a common complex factor") {
    RngStream gen(77);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + gen.nextBelow(6);
      std::vector<Value> values;
      std::vector<Complex> amps;
      for (std::size_t i = 0; i < n; ++i) {
        values.push_back(Value::integer(static_cast<std::int64_t>(i)));
        amps.emplace_back(gen.nextDouble() * 2 - 1, gen.nextDouble() * 2 - 1);
      }
      const Complex factor = std::polar(0.1 + 5 * gen.nextDouble(), 6.283185307179586 * gen.nextDouble());
      std::vector<Complex> scaled;
      for (auto a : amps) scaled.push_back(a * factor);
      auto p = categoricalProbabilities(RandomSpec::psi(values, amps));
      auto q = categoricalProbabilities(RandomSpec::psi(values, scaled));
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(p[i] - q[i]) <= 1e-12);
    }
  }

  TEST_CASE("sampleCategorical follows the given probabilities") {
    RngStream rng(31);
    const std::vector<double> probs = {0.1, 0.0, 0.6, 0.3};
    std::vector<int> counts(4, 0);
    const int n = 50000;
    for (int i = 0; i < n; ++i) ++counts[sampleCategorical(probs, rng)];
    CHECK(counts[1] == 0);
    for (int i : {0, 2, 3}) CHECK(std::abs(counts[i] / double(n) - probs[i]) < 4 * testsupport::binomialSigma(probs[i], n));
  }
}
