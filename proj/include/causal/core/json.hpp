#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "causal/core/state.hpp"

namespace causal {

using Json = nlohmann::ordered_json;

Json toJson(const Value& v);
Json toJson(const SystemState& s);

Value valueFromJson(const Json& j, const TypeDesc& type, const std::map<std::string, RecordDecl>& records);
SystemState stateFromJson(const Json& j, const SchemaPtr& schema);

}  // namespace causal
