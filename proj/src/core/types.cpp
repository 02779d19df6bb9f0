#include "causal/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causal/error.hpp"

namespace causal {

Domain Domain::interval(double lo, double hi) {
  Domain d;
  d.kind = Kind::Interval;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain Domain::set(std::vector<double> members) {
  Domain d;
  d.kind = Kind::Set;
  d.members = std::move(members);
  return d;
}

bool Domain::contains(double x) const {
  if (kind == Kind::Interval) return x >= lo && x <= hi;
  return std::find(members.begin(), members.end(), x) != members.end();
}

TypeDesc TypeDesc::real(std::optional<Domain> d) {
  TypeDesc t;
  t.kind = Kind::Real;
  t.domain = std::move(d);
  return t;
}

TypeDesc TypeDesc::integer(std::optional<Domain> d) {
  TypeDesc t;
  t.kind = Kind::Int;
  t.domain = std::move(d);
  return t;
}

TypeDesc TypeDesc::boolean() {
  TypeDesc t;
  t.kind = Kind::Bool;
  return t;
}

TypeDesc TypeDesc::complex(std::optional<Domain> d) {
  TypeDesc t;
  t.kind = Kind::Complex;
  t.domain = std::move(d);
  return t;
}

TypeDesc TypeDesc::vector(std::size_t length, std::optional<Domain> d) {
  TypeDesc t;
  t.kind = Kind::Vector;
  t.length = length;
  t.domain = std::move(d);
  return t;
}

TypeDesc TypeDesc::list(TypeDesc element, std::size_t maxLength) {
  TypeDesc t;
  t.kind = Kind::List;
  t.element = std::make_shared<const TypeDesc>(std::move(element));
  t.maxLength = maxLength;
  return t;
}

TypeDesc TypeDesc::record(std::string name) {
  TypeDesc t;
  t.kind = Kind::Record;
  t.recordName = std::move(name);
  return t;
}

TypeDesc TypeDesc::cgrid(std::size_t length, double dx) {
  TypeDesc t;
  t.kind = Kind::CGrid;
  t.length = length;
  t.dx = dx;
  return t;
}

TypeDesc TypeDesc::pw(std::vector<PwAttribute> attrs) {
  TypeDesc t;
  t.kind = Kind::Pw;
  t.pwAttrs = std::move(attrs);
  return t;
}

bool TypeDesc::sameType(const TypeDesc& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Vector: return length == o.length;
    case Kind::CGrid: return length == o.length && dx == o.dx;
    case Kind::List: return element->sameType(*o.element);
    case Kind::Record: return recordName == o.recordName;
    case Kind::Pw:
      if (pwAttrs.size() != o.pwAttrs.size()) return false;
      for (std::size_t i = 0; i < pwAttrs.size(); ++i) {
        if (pwAttrs[i].name != o.pwAttrs[i].name || !pwAttrs[i].type.sameType(o.pwAttrs[i].type)) {
          return false;
        }
      }
      return true;
    default: return true;
  }
}

void TypeDesc::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::InvalidArgument, "invalid type " + toString(*this) + ": " + why);
  };
  if ((kind == Kind::Vector || kind == Kind::CGrid) && length < 1) fail("length must be >= 1");
  if (kind == Kind::CGrid && !(dx > 0.0 && std::isfinite(dx))) fail("dx must be positive");
  if (kind == Kind::List && !element) fail("list without element type");
  if (kind == Kind::List) element->validate();
  if (kind == Kind::Pw) {
    if (pwAttrs.empty()) fail("pw collection needs at least one attribute");
    for (const auto& a : pwAttrs) {
      if (a.type.kind != Kind::Real && a.type.kind != Kind::Int && a.type.kind != Kind::Bool) {
        fail("pw attribute '" + a.name + "' must be real, int or bool");
      }
      a.type.validate();
    }
  }
  if (domain) {
    if (domain->kind == Domain::Kind::Interval) {
      if (!(domain->lo <= domain->hi)) fail("domain requires lo <= hi");
    } else if (domain->members.empty()) {
      fail("domain set is empty");
    }
    if (kind == Kind::Int) {
      auto integral = [](double x) { return std::floor(x) == x; };
      if (domain->kind == Domain::Kind::Set &&
          !std::all_of(domain->members.begin(), domain->members.end(), integral)) {
        fail("int domain members must be integers");
      }
    }
  }
}

std::string toString(const TypeDesc& t) {
  std::ostringstream os;
  switch (t.kind) {
    case TypeDesc::Kind::Real: os << "real"; break;
    case TypeDesc::Kind::Int: os << "int"; break;
    case TypeDesc::Kind::Bool: os << "bool"; break;
    case TypeDesc::Kind::Complex: os << "complex"; break;
    case TypeDesc::Kind::Vector: os << "vector(" << t.length << ")"; break;
    case TypeDesc::Kind::List:
      os << "list(" << (t.element ? toString(*t.element) : "?");
      if (t.maxLength > 0) os << ", " << t.maxLength;
      os << ")";
      break;
    case TypeDesc::Kind::Record: os << t.recordName; break;
    case TypeDesc::Kind::CGrid: os << "cgrid(" << t.length << ", " << t.dx << ")"; break;
    case TypeDesc::Kind::Pw: {
      os << "pw(";
      for (std::size_t i = 0; i < t.pwAttrs.size(); ++i) {
        if (i) os << ", ";
        os << t.pwAttrs[i].name << ": " << toString(t.pwAttrs[i].type);
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

std::optional<std::size_t> RecordDecl::memberIndex(const std::string& member) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].first == member) return i;
  }
  return std::nullopt;
}

}  // namespace causal
