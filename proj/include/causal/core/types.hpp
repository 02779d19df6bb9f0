#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causal {

// Sampling/enumeration domain of a scalar type. Set members are stored as
// doubles; int and bool members are integral (bool: 0/1).
struct Domain {
  enum class Kind { Interval, Set };
  Kind kind = Kind::Interval;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> members;

  static Domain interval(double lo, double hi);
  static Domain set(std::vector<double> members);

  bool contains(double x) const;
  bool operator==(const Domain&) const = default;
};

struct PwAttribute;

struct TypeDesc {
  enum class Kind { Real, Int, Bool, Complex, Vector, List, Record, CGrid, Pw };

  Kind kind = Kind::Real;
  std::size_t length = 0;                    // vector, cgrid
  double dx = 0.0;                           // cgrid
  std::shared_ptr<const TypeDesc> element;   // list
  std::size_t maxLength = 0;                 // list length bound, 0 = unbounded
  std::string recordName;                    // record
  std::vector<PwAttribute> pwAttrs;          // pw
  std::optional<Domain> domain;

  static TypeDesc real(std::optional<Domain> d = std::nullopt);
  static TypeDesc integer(std::optional<Domain> d = std::nullopt);
  static TypeDesc boolean();
  static TypeDesc complex(std::optional<Domain> d = std::nullopt);
  static TypeDesc vector(std::size_t length, std::optional<Domain> d = std::nullopt);
  static TypeDesc list(TypeDesc element, std::size_t maxLength = 0);
  static TypeDesc record(std::string name);
  static TypeDesc cgrid(std::size_t length, double dx);
  static TypeDesc pw(std::vector<PwAttribute> attrs);

  bool isNumeric() const { return kind == Kind::Real || kind == Kind::Int; }
  bool isScalar() const {
    return kind == Kind::Real || kind == Kind::Int || kind == Kind::Bool || kind == Kind::Complex;
  }

  // Structural type identity; domains are ignored.
  bool sameType(const TypeDesc& other) const;

  // Throws Error(InvalidArgument) when lengths, dx or domain are malformed.
  void validate() const;
};

struct PwAttribute {
  std::string name;
  TypeDesc type;  // real, int or bool
};

std::string toString(const TypeDesc& t);

struct RecordDecl {
  std::string name;
  std::vector<std::pair<std::string, TypeDesc>> members;

  std::optional<std::size_t> memberIndex(const std::string& member) const;
};

}  // namespace causal
