#pragma once

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causal/cml/frontend.hpp"
#include "causal/core/schema.hpp"
#include "causal/engine/model.hpp"
#include "causal/error.hpp"

namespace testsupport {

inline std::string sourcePath(const std::string& relative) { return std::string(CAUSAL_SOURCE_DIR) + "/" + relative; }

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline causal::ModelPtr compile(const std::string& source, const std::map<std::string, std::string>& params = {}) {
  auto result = causal::cml::compileModel(source, params);
  std::string diags;
  for (const auto& d : result.diagnostics) diags += causal::cml::format(d, "<test>") + "\n";
  REQUIRE_MESSAGE(result.model, diags);
  return result.model;
}

inline causal::ModelPtr compileFixture(const std::string& name) { return compile(readFile(sourcePath("fixtures/" + name))); }

inline causal::SchemaPtr schemaOf(std::vector<std::pair<std::string, causal::TypeDesc>> fields) {
  auto schema = std::make_shared<causal::StateSchema>();
  schema->fields = std::move(fields);
  schema->validate();
  return schema;
}

// Binomial standard deviation of an empirical frequency.
inline double binomialSigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// Name of the ErrorKind thrown by `f`, or "none".
inline std::string errorKind(const std::function<void()>& f) {
  try {
    f();
  } catch (const causal::Error& e) {
    return std::string(causal::toString(e.kind()));
  }
  return "none";
}

}  // namespace testsupport
