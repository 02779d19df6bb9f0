#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "causal/core/types.hpp"

namespace causal {

using Complex = std::complex<double>;

class Value;

struct RealVector {
  std::vector<double> items;
  bool operator==(const RealVector&) const = default;
};

struct ValueList {
  std::vector<Value> items;
  bool operator==(const ValueList&) const;
};

struct RecordValue {
  std::string name;
  std::vector<std::pair<std::string, Value>> members;  // declaration order
  bool operator==(const RecordValue&) const;
};

// Complex amplitudes on a uniform periodic grid with spacing dx.
struct ComplexGrid {
  std::vector<Complex> cells;
  double dx = 1.0;
  bool operator==(const ComplexGrid&) const = default;
};

// Particle/wave collection: n particles x m discrete paths. Every path holds
// a definite value for every attribute of every particle, plus one complex
// amplitude. Attribute values are stored path-major in one flat array.
class PwCollection {
 public:
  PwCollection() = default;
  PwCollection(std::vector<PwAttribute> attrs, std::size_t particles);

  std::size_t particleCount() const { return particles_; }
  std::size_t pathCount() const { return amplitudes_.size(); }
  std::size_t attributeCount() const { return attrs_ ? attrs_->size() : 0; }
  const std::vector<PwAttribute>& attributes() const;
  std::optional<std::size_t> attributeIndex(std::string_view name) const;

  // `values` holds particleCount() * attributeCount() entries, particle-major.
  void addPath(std::span<const double> values, Complex amplitude);

  double value(std::size_t path, std::size_t particle, std::size_t attr) const;
  void setValue(std::size_t path, std::size_t particle, std::size_t attr, double v);
  std::span<const double> pathValues(std::size_t path) const;
  Complex amplitude(std::size_t path) const { return amplitudes_[path]; }
  void setAmplitude(std::size_t path, Complex a) { amplitudes_[path] = a; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  // Sum of |a_i|^2 over paths.
  double norm2() const;
  // Scales amplitudes so that norm2() == 1. Throws Error(ZeroNorm).
  void normalize();

  // Collection holding only `path`, same attribute layout.
  PwCollection onlyPath(std::size_t path) const;

  bool operator==(const PwCollection& other) const;

 private:
  std::shared_ptr<const std::vector<PwAttribute>> attrs_;
  std::size_t particles_ = 0;
  std::vector<double> values_;
  std::vector<Complex> amplitudes_;
};

// Tagged value mirroring TypeDesc::Kind.
class Value {
 public:
  using Storage = std::variant<double, std::int64_t, bool, Complex, RealVector, ValueList,
                               RecordValue, ComplexGrid, PwCollection>;

  Value() : data_(0.0) {}

  static Value real(double x) { return Value(Storage(std::in_place_type<double>, x)); }
  static Value integer(std::int64_t n) { return Value(Storage(std::in_place_type<std::int64_t>, n)); }
  static Value boolean(bool b) { return Value(Storage(std::in_place_type<bool>, b)); }
  static Value complex(Complex z) { return Value(Storage(std::in_place_type<Complex>, z)); }
  static Value vector(std::vector<double> xs) { return Value(Storage(RealVector{std::move(xs)})); }
  static Value list(std::vector<Value> xs) { return Value(Storage(ValueList{std::move(xs)})); }
  static Value record(std::string name, std::vector<std::pair<std::string, Value>> members) {
    return Value(Storage(RecordValue{std::move(name), std::move(members)}));
  }
  static Value grid(std::vector<Complex> cells, double dx) {
    return Value(Storage(ComplexGrid{std::move(cells), dx}));
  }
  static Value pw(PwCollection c) { return Value(Storage(std::move(c))); }

  TypeDesc::Kind kind() const { return static_cast<TypeDesc::Kind>(data_.index()); }

  bool isReal() const { return std::holds_alternative<double>(data_); }
  bool isInt() const { return std::holds_alternative<std::int64_t>(data_); }
  bool isBool() const { return std::holds_alternative<bool>(data_); }
  bool isComplex() const { return std::holds_alternative<Complex>(data_); }

  double asReal() const { return std::get<double>(data_); }
  std::int64_t asInt() const { return std::get<std::int64_t>(data_); }
  bool asBool() const { return std::get<bool>(data_); }
  Complex asComplex() const { return std::get<Complex>(data_); }
  const RealVector& asVector() const { return std::get<RealVector>(data_); }
  RealVector& asVector() { return std::get<RealVector>(data_); }
  const ValueList& asList() const { return std::get<ValueList>(data_); }
  ValueList& asList() { return std::get<ValueList>(data_); }
  const RecordValue& asRecord() const { return std::get<RecordValue>(data_); }
  RecordValue& asRecord() { return std::get<RecordValue>(data_); }
  const ComplexGrid& asGrid() const { return std::get<ComplexGrid>(data_); }
  ComplexGrid& asGrid() { return std::get<ComplexGrid>(data_); }
  const PwCollection& asPw() const { return std::get<PwCollection>(data_); }
  PwCollection& asPw() { return std::get<PwCollection>(data_); }

  // Int and Real widen to double; anything else throws Error(TypeMismatch).
  double toDouble() const;
  // Int, Real and Complex widen to Complex.
  Complex toComplex() const;

  const Storage& storage() const { return data_; }

  bool operator==(const Value& other) const { return data_ == other.data_; }

 private:
  explicit Value(Storage s) : data_(std::move(s)) {}
  Storage data_;
};

std::string kindName(TypeDesc::Kind k);

// Zero/empty value of a type: 0, false, zero grids, empty lists and pw
// collections, records of zero members.
Value zeroValue(const TypeDesc& type, const std::map<std::string, RecordDecl>& records);

// True when `v` carries the tag and shape described by `type`.
bool conforms(const Value& v, const TypeDesc& type, const std::map<std::string, RecordDecl>& records);

// Compact one-line rendering used in messages and CSV cells.
std::string render(const Value& v);

}  // namespace causal
