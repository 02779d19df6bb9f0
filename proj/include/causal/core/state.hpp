#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causal/core/schema.hpp"
#include "causal/core/value.hpp"
#include "causal/engine/rng.hpp"

namespace causal {

// A complete assignment of values to the schema's fields at one time
// coordinate. Immutable in spirit: laws build new states from old ones.
class SystemState {
 public:
  // Validates the schema-match and finite-time invariants.
  SystemState(SchemaPtr schema, double time, std::vector<Value> values);

  const SchemaPtr& schema() const { return schema_; }
  double time() const { return time_; }
  const std::vector<Value>& values() const { return values_; }
  const Value& value(std::size_t field) const { return values_[field]; }
  const Value& value(const std::string& field) const;

  SystemState withTime(double t) const;

  // Mutable access for state builders (law application, init blocks).
  // Callers are responsible for keeping values well-typed.
  std::vector<Value>& mutableValues() { return values_; }
  void setTime(double t);

 private:
  SchemaPtr schema_;
  double time_;
  std::vector<Value> values_;
};

// Errors: MissingField(name), TypeMismatch(name).
SystemState makeInitialState(const SchemaPtr& schema, const std::map<std::string, Value>& assignments);

// Draws every field uniformly from its declared domain. Errors:
// UnsampleableField(name) for fields without a usable domain.
SystemState sampleState(const SchemaPtr& schema, RngStream& rng);

// Names of fields sampleState cannot draw.
std::vector<std::string> unsampleableFields(const StateSchema& schema);

// Cartesian product of all finite domains, in lexicographic field order.
// Errors: UnsampleableField for a non-finite field; InvalidArgument when the
// product exceeds `limit`.
std::vector<SystemState> enumerateStates(const SchemaPtr& schema, std::size_t limit);

// Errors: SchemaMismatch when the states use different layouts.
bool deepEqual(const SystemState& a, const SystemState& b, double tol);

}  // namespace causal
