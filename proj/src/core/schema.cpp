#include "causal/core/schema.hpp"

#include <functional>
#include <set>

#include "causal/error.hpp"

namespace causal {

std::optional<std::size_t> StateSchema::fieldIndex(const std::string& name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].first == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> StateSchema::constantIndex(const std::string& name) const {
  for (std::size_t i = 0; i < constantTypes.size(); ++i) {
    if (constantTypes[i].first == name) return i;
  }
  return std::nullopt;
}

const RecordDecl& StateSchema::record(const std::string& name) const {
  auto it = records.find(name);
  if (it == records.end()) throw Error(ErrorKind::InvalidArgument, "unknown record '" + name + "'", name);
  return it->second;
}

void StateSchema::validate() const {
  std::set<std::string> names;
  auto claim = [&](const std::string& name) {
    if (name == "dt" || name == "time") {
      throw Error(ErrorKind::InvalidArgument, "'" + name + "' is a reserved name", name);
    }
    if (!names.insert(name).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate name '" + name + "'", name);
    }
  };

  std::function<void(const TypeDesc&)> checkRefs = [&](const TypeDesc& t) {
    t.validate();
    if (t.kind == TypeDesc::Kind::Record && !records.count(t.recordName)) {
      throw Error(ErrorKind::InvalidArgument, "unknown record '" + t.recordName + "'", t.recordName);
    }
    if (t.kind == TypeDesc::Kind::List) checkRefs(*t.element);
  };

  for (const auto& [name, decl] : records) {
    std::set<std::string> members;
    for (const auto& [m, t] : decl.members) {
      if (!members.insert(m).second) {
        throw Error(ErrorKind::InvalidArgument, "duplicate member '" + m + "' in record " + name, m);
      }
      checkRefs(t);
    }
  }

  // Record cycle detection, following list elements too.
  std::map<std::string, int> color;
  std::function<void(const std::string&)> visit = [&](const std::string& rec) {
    color[rec] = 1;
    std::function<void(const TypeDesc&)> walk = [&](const TypeDesc& t) {
      if (t.kind == TypeDesc::Kind::List) return walk(*t.element);
      if (t.kind != TypeDesc::Kind::Record) return;
      int c = color[t.recordName];
      if (c == 1) {
        throw Error(ErrorKind::InvalidArgument, "cyclic record definition through '" + t.recordName + "'",
                    t.recordName);
      }
      if (c == 0) visit(t.recordName);
    };
    for (const auto& member : records.at(rec).members) walk(member.second);
    color[rec] = 2;
  };
  for (const auto& entry : records) {
    if (color[entry.first] == 0) visit(entry.first);
  }

  for (const auto& [name, t] : fields) {
    claim(name);
    checkRefs(t);
  }
  if (constantTypes.size() != constantValues.size()) {
    throw Error(ErrorKind::InvalidArgument, "constant table is inconsistent");
  }
  for (std::size_t i = 0; i < constantTypes.size(); ++i) {
    claim(constantTypes[i].first);
    checkRefs(constantTypes[i].second);
    if (!conforms(constantValues[i], constantTypes[i].second, records)) {
      throw Error(ErrorKind::TypeMismatch,
                  "constant '" + constantTypes[i].first + "' does not match type " +
                      toString(constantTypes[i].second),
                  constantTypes[i].first);
    }
  }
  if (timeDomain && timeDomain->kind == Domain::Kind::Interval && !(timeDomain->lo <= timeDomain->hi)) {
    throw Error(ErrorKind::InvalidArgument, "time domain requires lo <= hi");
  }
}

bool StateSchema::sameLayout(const StateSchema& o) const {
  if (this == &o) return true;
  if (fields.size() != o.fields.size()) return false;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].first != o.fields[i].first || !fields[i].second.sameType(o.fields[i].second)) {
      return false;
    }
  }
  return true;
}

}  // namespace causal
