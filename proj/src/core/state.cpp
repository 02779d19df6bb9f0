#include "causal/core/state.hpp"

#include <cmath>
#include <functional>

#include "causal/error.hpp"

namespace causal {

SystemState::SystemState(SchemaPtr schema, double time, std::vector<Value> values)
    : schema_(std::move(schema)), time_(time), values_(std::move(values)) {
  if (!schema_) throw Error(ErrorKind::InvalidArgument, "state without schema");
  if (!std::isfinite(time_)) throw Error(ErrorKind::InvalidArgument, "state time must be finite");
  if (values_.size() != schema_->fields.size()) {
    throw Error(ErrorKind::MissingField, "state has " + std::to_string(values_.size()) +
                                             " values for " + std::to_string(schema_->fields.size()) +
                                             " fields");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto& [name, type] = schema_->fields[i];
    if (!conforms(values_[i], type, schema_->records)) {
      throw Error(ErrorKind::TypeMismatch,
                  "field '" + name + "': expected " + toString(type) + ", got " + kindName(values_[i].kind()),
                  name);
    }
  }
}

const Value& SystemState::value(const std::string& field) const {
  auto idx = schema_->fieldIndex(field);
  if (!idx) throw Error(ErrorKind::MissingField, "no field '" + field + "'", field);
  return values_[*idx];
}

SystemState SystemState::withTime(double t) const {
  SystemState s = *this;
  s.setTime(t);
  return s;
}

void SystemState::setTime(double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "state time must be finite");
  time_ = t;
}

SystemState makeInitialState(const SchemaPtr& schema, const std::map<std::string, Value>& assignments) {
  std::vector<Value> values;
  values.reserve(schema->fields.size());
  for (const auto& [name, type] : schema->fields) {
    auto it = assignments.find(name);
    if (it == assignments.end()) {
      throw Error(ErrorKind::MissingField, "no initial value for field '" + name + "'", name);
    }
    if (!conforms(it->second, type, schema->records)) {
      throw Error(ErrorKind::TypeMismatch,
                  "field '" + name + "': expected " + toString(type) + ", got " +
                      kindName(it->second.kind()),
                  name);
    }
    values.push_back(it->second);
  }
  for (const auto& [name, v] : assignments) {
    if (!schema->fieldIndex(name)) {
      throw Error(ErrorKind::MissingField, "assignment to unknown field '" + name + "'", name);
    }
  }
  return SystemState(schema, 0.0, std::move(values));
}

namespace {

using Records = std::map<std::string, RecordDecl>;

bool sampleable(const TypeDesc& t, const Records& records) {
  switch (t.kind) {
    case TypeDesc::Kind::Bool: return true;
    case TypeDesc::Kind::Real:
    case TypeDesc::Kind::Int:
    case TypeDesc::Kind::Complex:
    case TypeDesc::Kind::Vector: return t.domain.has_value();
    case TypeDesc::Kind::List: return t.maxLength > 0 && sampleable(*t.element, records);
    case TypeDesc::Kind::Record:
      for (const auto& m : records.at(t.recordName).members) {
        if (!sampleable(m.second, records)) return false;
      }
      return true;
    case TypeDesc::Kind::CGrid:
    case TypeDesc::Kind::Pw: return false;
  }
  return false;
}

double drawScalar(const Domain& d, bool integral, RngStream& rng) {
  if (d.kind == Domain::Kind::Set) return d.members[rng.nextBelow(d.members.size())];
  if (integral) {
    const auto lo = static_cast<std::int64_t>(std::ceil(d.lo));
    const auto hi = static_cast<std::int64_t>(std::floor(d.hi));
    if (hi < lo) throw Error(ErrorKind::UnsampleableField, "int interval contains no integer");
    return static_cast<double>(lo + static_cast<std::int64_t>(rng.nextBelow(static_cast<std::uint64_t>(hi - lo) + 1)));
  }
  // Closed interval: both endpoints are reachable.
  return d.lo + (d.hi - d.lo) * rng.nextClosed();
}

Value drawValue(const TypeDesc& t, const Records& records, RngStream& rng) {
  switch (t.kind) {
    case TypeDesc::Kind::Real: return Value::real(drawScalar(*t.domain, false, rng));
    case TypeDesc::Kind::Int:
      return Value::integer(static_cast<std::int64_t>(drawScalar(*t.domain, true, rng)));
    case TypeDesc::Kind::Bool:
      if (t.domain) return Value::boolean(drawScalar(*t.domain, true, rng) != 0.0);
      return Value::boolean(rng.nextBelow(2) == 1);
    case TypeDesc::Kind::Complex: {
      const double re = drawScalar(*t.domain, false, rng);
      const double im = drawScalar(*t.domain, false, rng);
      return Value::complex({re, im});
    }
    case TypeDesc::Kind::Vector: {
      std::vector<double> xs(t.length);
      for (auto& x : xs) x = drawScalar(*t.domain, false, rng);
      return Value::vector(std::move(xs));
    }
    case TypeDesc::Kind::List: {
      const auto n = rng.nextBelow(t.maxLength + 1);
      std::vector<Value> items;
      items.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) items.push_back(drawValue(*t.element, records, rng));
      return Value::list(std::move(items));
    }
    case TypeDesc::Kind::Record: {
      const auto& decl = records.at(t.recordName);
      std::vector<std::pair<std::string, Value>> members;
      for (const auto& [name, mt] : decl.members) members.emplace_back(name, drawValue(mt, records, rng));
      return Value::record(decl.name, std::move(members));
    }
    default: break;
  }
  throw Error(ErrorKind::UnsampleableField, "type " + toString(t) + " is not sampleable");
}

// All values of a finite type, or nullopt when the type is not finite.
std::optional<std::vector<Value>> finiteValues(const TypeDesc& t, const Records& records, std::size_t limit) {
  std::vector<Value> out;
  switch (t.kind) {
    case TypeDesc::Kind::Bool:
      if (t.domain) {
        for (double m : t.domain->members) out.push_back(Value::boolean(m != 0.0));
        if (t.domain->kind == Domain::Kind::Interval) return std::nullopt;
      } else {
        out = {Value::boolean(false), Value::boolean(true)};
      }
      return out;
    case TypeDesc::Kind::Int:
      if (!t.domain) return std::nullopt;
      if (t.domain->kind == Domain::Kind::Set) {
        for (double m : t.domain->members) out.push_back(Value::integer(static_cast<std::int64_t>(m)));
      } else {
        const double span = std::floor(t.domain->hi) - std::ceil(t.domain->lo) + 1;
        if (span > static_cast<double>(limit)) return std::nullopt;
        for (auto k = static_cast<std::int64_t>(std::ceil(t.domain->lo));
             k <= static_cast<std::int64_t>(std::floor(t.domain->hi)); ++k) {
          out.push_back(Value::integer(k));
        }
      }
      return out;
    case TypeDesc::Kind::Real:
      if (!t.domain || t.domain->kind != Domain::Kind::Set) return std::nullopt;
      for (double m : t.domain->members) out.push_back(Value::real(m));
      return out;
    case TypeDesc::Kind::Record: {
      const auto& decl = records.at(t.recordName);
      std::vector<std::vector<Value>> parts;
      for (const auto& m : decl.members) {
        auto vals = finiteValues(m.second, records, limit);
        if (!vals) return std::nullopt;
        parts.push_back(std::move(*vals));
      }
      std::vector<std::size_t> idx(parts.size(), 0);
      while (true) {
        std::vector<std::pair<std::string, Value>> members;
        for (std::size_t i = 0; i < parts.size(); ++i) members.emplace_back(decl.members[i].first, parts[i][idx[i]]);
        out.push_back(Value::record(decl.name, std::move(members)));
        if (out.size() > limit) return std::nullopt;
        std::size_t k = parts.size();
        while (k > 0) {
          --k;
          if (++idx[k] < parts[k].size()) break;
          idx[k] = 0;
          if (k == 0) return out;
        }
        if (parts.empty()) return out;
      }
    }
    default: return std::nullopt;
  }
}

bool nearlyEqual(const Value& a, const Value& b, double tol);

bool close(double x, double y, double tol) {
  if (x == y) return true;
  return std::fabs(x - y) <= tol;
}

bool nearlyEqual(const Value& a, const Value& b, double tol) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeDesc::Kind::Real: return close(a.asReal(), b.asReal(), tol);
    case TypeDesc::Kind::Int: return a.asInt() == b.asInt();
    case TypeDesc::Kind::Bool: return a.asBool() == b.asBool();
    case TypeDesc::Kind::Complex:
      return close(a.asComplex().real(), b.asComplex().real(), tol) &&
             close(a.asComplex().imag(), b.asComplex().imag(), tol);
    case TypeDesc::Kind::Vector: {
      const auto& x = a.asVector().items;
      const auto& y = b.asVector().items;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!close(x[i], y[i], tol)) return false;
      }
      return true;
    }
    case TypeDesc::Kind::List: {
      const auto& x = a.asList().items;
      const auto& y = b.asList().items;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!nearlyEqual(x[i], y[i], tol)) return false;
      }
      return true;
    }
    case TypeDesc::Kind::Record: {
      const auto& x = a.asRecord();
      const auto& y = b.asRecord();
      if (x.name != y.name || x.members.size() != y.members.size()) return false;
      for (std::size_t i = 0; i < x.members.size(); ++i) {
        if (x.members[i].first != y.members[i].first) return false;
        if (!nearlyEqual(x.members[i].second, y.members[i].second, tol)) return false;
      }
      return true;
    }
    case TypeDesc::Kind::CGrid: {
      const auto& x = a.asGrid();
      const auto& y = b.asGrid();
      if (x.dx != y.dx || x.cells.size() != y.cells.size()) return false;
      for (std::size_t i = 0; i < x.cells.size(); ++i) {
        if (!close(x.cells[i].real(), y.cells[i].real(), tol) || !close(x.cells[i].imag(), y.cells[i].imag(), tol)) {
          return false;
        }
      }
      return true;
    }
    case TypeDesc::Kind::Pw: {
      const auto& x = a.asPw();
      const auto& y = b.asPw();
      if (x.particleCount() != y.particleCount() || x.pathCount() != y.pathCount() ||
          x.attributeCount() != y.attributeCount()) {
        return false;
      }
      for (std::size_t p = 0; p < x.pathCount(); ++p) {
        auto xv = x.pathValues(p);
        auto yv = y.pathValues(p);
        for (std::size_t i = 0; i < xv.size(); ++i) {
          if (!close(xv[i], yv[i], tol)) return false;
        }
        const auto ax = x.amplitude(p);
        const auto ay = y.amplitude(p);
        if (!close(ax.real(), ay.real(), tol) || !close(ax.imag(), ay.imag(), tol)) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

SystemState sampleState(const SchemaPtr& schema, RngStream& rng) {
  for (const auto& [name, type] : schema->fields) {
    if (!sampleable(type, schema->records)) {
      throw Error(ErrorKind::UnsampleableField,
                  "field '" + name + "' of type " + toString(type) + " has no sampling domain", name);
    }
  }
  std::vector<Value> values;
  values.reserve(schema->fields.size());
  for (const auto& field : schema->fields) values.push_back(drawValue(field.second, schema->records, rng));
  double t = 0.0;
  if (schema->timeDomain) t = drawScalar(*schema->timeDomain, false, rng);
  return SystemState(schema, t, std::move(values));
}

std::vector<std::string> unsampleableFields(const StateSchema& schema) {
  std::vector<std::string> out;
  for (const auto& [name, type] : schema.fields) {
    if (!sampleable(type, schema.records)) out.push_back(name);
  }
  return out;
}

std::vector<SystemState> enumerateStates(const SchemaPtr& schema, std::size_t limit) {
  std::vector<std::vector<Value>> choices;
  for (const auto& [name, type] : schema->fields) {
    auto vals = finiteValues(type, schema->records, limit);
    if (!vals) {
      throw Error(ErrorKind::UnsampleableField,
                  "field '" + name + "' of type " + toString(type) + " has no finite domain", name);
    }
    choices.push_back(std::move(*vals));
  }
  double total = 1.0;
  for (const auto& c : choices) total *= static_cast<double>(c.size());
  if (total > static_cast<double>(limit)) {
    throw Error(ErrorKind::InvalidArgument,
                "enumeration needs " + std::to_string(static_cast<long double>(total)) + " states, limit is " +
                    std::to_string(limit));
  }
  std::vector<SystemState> out;
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    std::vector<Value> values;
    for (std::size_t i = 0; i < choices.size(); ++i) values.push_back(choices[i][idx[i]]);
    out.emplace_back(schema, 0.0, std::move(values));
    std::size_t k = choices.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  return out;
}

bool deepEqual(const SystemState& a, const SystemState& b, double tol) {
  if (!a.schema()->sameLayout(*b.schema())) {
    throw Error(ErrorKind::SchemaMismatch, "states use different schemas");
  }
  if (!close(a.time(), b.time(), tol)) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (!nearlyEqual(a.value(i), b.value(i), tol)) return false;
  }
  return true;
}

}  // namespace causal
