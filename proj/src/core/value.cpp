#include "causal/core/value.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "causal/error.hpp"

namespace causal {

bool ValueList::operator==(const ValueList& o) const { return items == o.items; }

bool RecordValue::operator==(const RecordValue& o) const {
  return name == o.name && members == o.members;
}

PwCollection::PwCollection(std::vector<PwAttribute> attrs, std::size_t particles)
    : attrs_(std::make_shared<const std::vector<PwAttribute>>(std::move(attrs))),
      particles_(particles) {}

const std::vector<PwAttribute>& PwCollection::attributes() const {
  static const std::vector<PwAttribute> kEmpty;
  return attrs_ ? *attrs_ : kEmpty;
}

std::optional<std::size_t> PwCollection::attributeIndex(std::string_view name) const {
  const auto& attrs = attributes();
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (attrs[i].name == name) return i;
  }
  return std::nullopt;
}

void PwCollection::addPath(std::span<const double> values, Complex amplitude) {
  if (values.size() != particles_ * attributeCount()) {
    throw Error(ErrorKind::InvalidArgument,
                "pw path needs " + std::to_string(particles_ * attributeCount()) +
                    " attribute values, got " + std::to_string(values.size()));
  }
  values_.insert(values_.end(), values.begin(), values.end());
  amplitudes_.push_back(amplitude);
}

double PwCollection::value(std::size_t path, std::size_t particle, std::size_t attr) const {
  return values_[(path * particles_ + particle) * attributeCount() + attr];
}

void PwCollection::setValue(std::size_t path, std::size_t particle, std::size_t attr, double v) {
  values_[(path * particles_ + particle) * attributeCount() + attr] = v;
}

std::span<const double> PwCollection::pathValues(std::size_t path) const {
  const std::size_t stride = particles_ * attributeCount();
  return std::span<const double>(values_).subspan(path * stride, stride);
}

double PwCollection::norm2() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

void PwCollection::normalize() {
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw Error(ErrorKind::ZeroNorm, "pw collection has zero norm");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : amplitudes_) a *= scale;
}

PwCollection PwCollection::onlyPath(std::size_t path) const {
  PwCollection out;
  out.attrs_ = attrs_;
  out.particles_ = particles_;
  auto vals = pathValues(path);
  out.values_.assign(vals.begin(), vals.end());
  out.amplitudes_.push_back(amplitudes_[path]);
  return out;
}

bool PwCollection::operator==(const PwCollection& o) const {
  if (particles_ != o.particles_ || values_ != o.values_ || amplitudes_ != o.amplitudes_) return false;
  const auto& a = attributes();
  const auto& b = o.attributes();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || !a[i].type.sameType(b[i].type)) return false;
  }
  return true;
}

double Value::toDouble() const {
  if (isReal()) return asReal();
  if (isInt()) return static_cast<double>(asInt());
  throw Error(ErrorKind::TypeMismatch, "expected a number, got " + kindName(kind()));
}

Complex Value::toComplex() const {
  if (isComplex()) return asComplex();
  return Complex(toDouble(), 0.0);
}

std::string kindName(TypeDesc::Kind k) {
  switch (k) {
    case TypeDesc::Kind::Real: return "real";
    case TypeDesc::Kind::Int: return "int";
    case TypeDesc::Kind::Bool: return "bool";
    case TypeDesc::Kind::Complex: return "complex";
    case TypeDesc::Kind::Vector: return "vector";
    case TypeDesc::Kind::List: return "list";
    case TypeDesc::Kind::Record: return "record";
    case TypeDesc::Kind::CGrid: return "cgrid";
    case TypeDesc::Kind::Pw: return "pw";
  }
  return "?";
}

Value zeroValue(const TypeDesc& type, const std::map<std::string, RecordDecl>& records) {
  switch (type.kind) {
    case TypeDesc::Kind::Real: return Value::real(0.0);
    case TypeDesc::Kind::Int: return Value::integer(0);
    case TypeDesc::Kind::Bool: return Value::boolean(false);
    case TypeDesc::Kind::Complex: return Value::complex({0.0, 0.0});
    case TypeDesc::Kind::Vector: return Value::vector(std::vector<double>(type.length, 0.0));
    case TypeDesc::Kind::List: return Value::list({});
    case TypeDesc::Kind::Record: {
      const auto& decl = records.at(type.recordName);
      std::vector<std::pair<std::string, Value>> members;
      members.reserve(decl.members.size());
      for (const auto& [name, t] : decl.members) members.emplace_back(name, zeroValue(t, records));
      return Value::record(decl.name, std::move(members));
    }
    case TypeDesc::Kind::CGrid:
      return Value::grid(std::vector<Complex>(type.length, Complex(0.0, 0.0)), type.dx);
    case TypeDesc::Kind::Pw: return Value::pw(PwCollection(type.pwAttrs, 1));
  }
  return Value();
}

bool conforms(const Value& v, const TypeDesc& type, const std::map<std::string, RecordDecl>& records) {
  if (v.kind() != type.kind) return false;
  switch (type.kind) {
    case TypeDesc::Kind::Vector: return v.asVector().items.size() == type.length;
    case TypeDesc::Kind::CGrid:
      return v.asGrid().cells.size() == type.length && v.asGrid().dx == type.dx;
    case TypeDesc::Kind::List:
      for (const auto& item : v.asList().items) {
        if (!conforms(item, *type.element, records)) return false;
      }
      return true;
    case TypeDesc::Kind::Record: {
      const auto& rec = v.asRecord();
      auto it = records.find(type.recordName);
      if (it == records.end() || rec.name != type.recordName) return false;
      const auto& decl = it->second;
      if (rec.members.size() != decl.members.size()) return false;
      for (std::size_t i = 0; i < decl.members.size(); ++i) {
        if (rec.members[i].first != decl.members[i].first) return false;
        if (!conforms(rec.members[i].second, decl.members[i].second, records)) return false;
      }
      return true;
    }
    case TypeDesc::Kind::Pw: {
      const auto& pw = v.asPw();
      const auto& attrs = pw.attributes();
      if (attrs.size() != type.pwAttrs.size() || pw.particleCount() < 1) return false;
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (attrs[i].name != type.pwAttrs[i].name || !attrs[i].type.sameType(type.pwAttrs[i].type)) {
          return false;
        }
      }
      return true;
    }
    default: return true;
  }
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string render(const Value& v) {
  std::ostringstream os;
  switch (v.kind()) {
    case TypeDesc::Kind::Real: return num(v.asReal());
    case TypeDesc::Kind::Int: return std::to_string(v.asInt());
    case TypeDesc::Kind::Bool: return v.asBool() ? "true" : "false";
    case TypeDesc::Kind::Complex:
      return "complex(" + num(v.asComplex().real()) + ", " + num(v.asComplex().imag()) + ")";
    case TypeDesc::Kind::Vector: {
      os << "[";
      const auto& xs = v.asVector().items;
      for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << num(xs[i]);
      os << "]";
      break;
    }
    case TypeDesc::Kind::List: {
      os << "[";
      const auto& xs = v.asList().items;
      for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << render(xs[i]);
      os << "]";
      break;
    }
    case TypeDesc::Kind::Record: {
      const auto& r = v.asRecord();
      os << r.name << " { ";
      for (std::size_t i = 0; i < r.members.size(); ++i) {
        os << (i ? ", " : "") << r.members[i].first << ": " << render(r.members[i].second);
      }
      os << " }";
      break;
    }
    case TypeDesc::Kind::CGrid:
      os << "cgrid(" << v.asGrid().cells.size() << " cells, dx=" << num(v.asGrid().dx) << ")";
      break;
    case TypeDesc::Kind::Pw:
      os << "pw(" << v.asPw().particleCount() << " particles, " << v.asPw().pathCount() << " paths)";
      break;
  }
  return os.str();
}

}  // namespace causal
