#include <doctest.h>

#include <cmath>
#include <random>

#include "causal/core/json.hpp"
#include "causal/core/state.hpp"
#include "causal/error.hpp"
#include "support.hpp"

using namespace causal;
using testsupport::errorKind;
using testsupport::schemaOf;

namespace {

// Random schema of 1..5 scalar/vector fields, every one with a domain.
SchemaPtr randomSchema(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> count(1, 5), kind(0, 4), len(1, 6), lo(-50, 50), width(0, 20);
  std::vector<std::pair<std::string, TypeDesc>> fields;
  const int n = count(gen);
  for (int i = 0; i < n; ++i) {
    const double a = lo(gen);
    const double b = a + width(gen);
    TypeDesc t;
    switch (kind(gen)) {
      case 0: t = TypeDesc::real(Domain::interval(a, b)); break;
      case 1: t = TypeDesc::integer(Domain::interval(a, b)); break;
      case 2: t = TypeDesc::boolean(); break;
      case 3: t = TypeDesc::integer(Domain::set({a, b, b + 3})); break;
      default: t = TypeDesc::vector(static_cast<std::size_t>(len(gen)), Domain::interval(a, b)); break;
    }
    fields.emplace_back("f" + std::to_string(i), t);
  }
  return schemaOf(std::move(fields));
}

bool inDomain(const Value& v, const TypeDesc& t) {
  if (t.kind == TypeDesc::Kind::Bool) return v.isBool();
  if (t.kind == TypeDesc::Kind::Vector) {
    for (double x : v.asVector().items) {
      if (!t.domain->contains(x)) return false;
    }
    return true;
  }
  if (t.kind == TypeDesc::Kind::Int && v.isInt()) return t.domain->contains(static_cast<double>(v.asInt()));
  if (t.kind == TypeDesc::Kind::Real && v.isReal()) return t.domain->contains(v.asReal());
  return false;
}

}  // namespace

TEST_SUITE("core-state") {
  TEST_CASE("makeInitialState builds, rejects missing fields and mismatched types") {
    auto schema = schemaOf({{"n", TypeDesc::integer()}});
    auto s = makeInitialState(schema, {{"n", Value::integer(0)}});
    CHECK(s.time() == 0.0);
    CHECK(s.value("n").asInt() == 0);

    CHECK(errorKind([&] { makeInitialState(schema, {}); }) == "MissingField");
    auto xs = schemaOf({{"x", TypeDesc::real()}});
    CHECK(errorKind([&] { makeInitialState(xs, {{"x", Value::boolean(true)}}); }) == "TypeMismatch");
  }

  TEST_CASE("sampleState respects an interval and sees both booleans") {
    auto schema = schemaOf({{"x", TypeDesc::real(Domain::interval(0.0, 1.0))}, {"b", TypeDesc::boolean()}});
    RngStream rng(3);
    bool seenTrue = false, seenFalse = false;
    for (int i = 0; i < 100; ++i) {
      auto s = sampleState(schema, rng);
      CHECK(s.value("x").asReal() >= 0.0);
      CHECK(s.value("x").asReal() <= 1.0);
      (s.value("b").asBool() ? seenTrue : seenFalse) = true;
    }
    CHECK(seenTrue);
    CHECK(seenFalse);
  }

  TEST_CASE("cgrid without a domain is unsampleable") {
    auto schema = schemaOf({{"psi", TypeDesc::cgrid(64, 0.1)}});
    RngStream rng(0);
    CHECK(errorKind([&] { sampleState(schema, rng); }) == "UnsampleableField");
    CHECK(unsampleableFields(*schema) == std::vector<std::string>{"psi"});
  }

  TEST_CASE("deepEqual honours the tolerance") {
    auto schema = schemaOf({{"x", TypeDesc::real()}});
    auto a = makeInitialState(schema, {{"x", Value::real(1.0)}});
    auto b = makeInitialState(schema, {{"x", Value::real(1.0 + 1e-12)}});
    auto c = makeInitialState(schema, {{"x", Value::real(2.0)}});
    CHECK(deepEqual(a, a, 0.0));
    CHECK(deepEqual(a, b, 1e-9));
    CHECK_FALSE(deepEqual(a, c, 1e-9));
  }

  TEST_CASE("enumerateStates is the product of the finite domains") {
    auto schema = schemaOf({{"a", TypeDesc::integer(Domain::interval(0, 2))},
                            {"b", TypeDesc::boolean()},
                            {"c", TypeDesc::integer(Domain::set({-1, 5}))}});
    auto states = enumerateStates(schema, 1000);
    CHECK(states.size() == 3 * 2 * 2);
    CHECK(errorKind([&] { enumerateStates(schema, 5); }) == "InvalidArgument");
    auto reals = schemaOf({{"x", TypeDesc::real(Domain::interval(0.0, 1.0))}});
    CHECK(errorKind([&] { enumerateStates(reals, 1000); }) == "UnsampleableField");
  }

  TEST_CASE("states survive a JSON round trip") {
    auto schema = schemaOf({{"x", TypeDesc::real()},
                            {"z", TypeDesc::complex()},
                            {"g", TypeDesc::cgrid(3, 0.5)},
                            {"v", TypeDesc::vector(2)}});
    auto s = makeInitialState(schema, {{"x", Value::real(0.1)},
                                       {"z", Value::complex({1.0, -2.0})},
                                       {"g", Value::grid({{1, 0}, {0, 1}, {0.5, 0.5}}, 0.5)},
                                       {"v", Value::vector({3.0, 4.0})}});
    auto back = stateFromJson(toJson(s), schema);
    CHECK(deepEqual(s, back, 0.0));
  }

  TEST_CASE("property: sampled states conform and stay in their domains") {
    std::mt19937_64 gen(20240601);
    for (int trial = 0; trial < 200; ++trial) {
      auto schema = randomSchema(gen);
      RngStream rng(static_cast<std::uint64_t>(trial));
      for (int draw = 0; draw < 50; ++draw) {
        auto s = sampleState(schema, rng);
        for (std::size_t f = 0; f < schema->fields.size(); ++f) {
          const auto& type = schema->fields[f].second;
          REQUIRE(conforms(s.value(f), type, schema->records));
          REQUIRE(inDomain(s.value(f), type));
        }
        auto other = sampleState(schema, rng);
        CHECK(deepEqual(s, s, 0.0));
        CHECK(deepEqual(s, other, 0.0) == deepEqual(other, s, 0.0));
      }
    }
  }

  TEST_CASE("property: every domain value is eventually drawn for small int sets") {
    auto schema = schemaOf({{"k", TypeDesc::integer(Domain::interval(-2, 2))}});
    RngStream rng(11);
    std::map<std::int64_t, int> seen;
    for (int i = 0; i < 10000; ++i) ++seen[sampleState(schema, rng).value("k").asInt()];
    CHECK(seen.size() == 5);
    for (auto& [k, c] : seen) CHECK(std::abs(c - 2000) < 4 * std::sqrt(10000 * 0.2 * 0.8));
  }
}
