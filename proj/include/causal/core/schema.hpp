#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal/core/types.hpp"
#include "causal/core/value.hpp"

namespace causal {

// Field layout of a system state plus the record and constant tables the
// laws refer to. Immutable once validated; shared by every state built on it.
struct StateSchema {
  std::vector<std::pair<std::string, TypeDesc>> fields;
  std::map<std::string, RecordDecl> records;
  std::vector<std::pair<std::string, TypeDesc>> constantTypes;
  std::vector<Value> constantValues;
  std::optional<Domain> timeDomain;

  std::optional<std::size_t> fieldIndex(const std::string& name) const;
  std::optional<std::size_t> constantIndex(const std::string& name) const;
  const RecordDecl& record(const std::string& name) const;

  // Checks record references, record cycles, name uniqueness, and that
  // constant values conform to their declared types.
  void validate() const;

  bool sameLayout(const StateSchema& other) const;
};

using SchemaPtr = std::shared_ptr<const StateSchema>;

}  // namespace causal
