#include "causal/engine/intrinsic.hpp"

#include <algorithm>
#include <cmath>

#include "causal/error.hpp"

namespace causal {

bool Intrinsic::takesLambda(std::size_t position) const {
  return std::find(lambdaArgs.begin(), lambdaArgs.end(), position) != lambdaArgs.end();
}

void IntrinsicRegistry::add(Intrinsic fn) {
  auto name = fn.name;
  entries_.insert_or_assign(std::move(name), std::move(fn));
}

const Intrinsic* IntrinsicRegistry::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> IntrinsicRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, fn] : entries_) out.push_back(name);
  return out;
}

namespace {

using Kind = TypeDesc::Kind;
using Records = std::map<std::string, RecordDecl>;

bool numericOrComplex(const TypeDesc& t) { return t.isNumeric() || t.kind == Kind::Complex; }

Intrinsic unary(std::string name, std::function<std::optional<TypeDesc>(const TypeDesc&, std::string&)> typing,
                std::function<Value(const Value&)> fn) {
  Intrinsic in;
  in.name = std::move(name);
  in.minArgs = 1;
  in.maxArgs = 1;
  in.result = [typing = std::move(typing)](std::span<const TypeDesc> args, const Records&, std::string& why) {
    return typing(args[0], why);
  };
  in.eval = [fn = std::move(fn)](std::span<const Value> args, std::span<const RealFn>, IntrinsicContext&) {
    return fn(args[0]);
  };
  return in;
}

std::optional<TypeDesc> toReal(const TypeDesc& t, std::string& why) {
  if (numericOrComplex(t)) return TypeDesc::real();
  why = "expected a number, got " + toString(t);
  return std::nullopt;
}

// real -> real, complex -> complex
std::optional<TypeDesc> analytic(const TypeDesc& t, std::string& why) {
  if (t.isNumeric()) return TypeDesc::real();
  if (t.kind == Kind::Complex) return TypeDesc::complex();
  why = "expected a number, got " + toString(t);
  return std::nullopt;
}

Intrinsic analyticFn(std::string name, double (*real)(double), Complex (*cplx)(const Complex&)) {
  return unary(std::move(name), analytic, [real, cplx](const Value& v) {
    if (v.isComplex()) return Value::complex(cplx(v.asComplex()));
    return Value::real(real(v.toDouble()));
  });
}

Value sumOf(const Value& v) {
  if (v.kind() == Kind::Vector) {
    double s = 0.0;
    for (double x : v.asVector().items) s += x;
    return Value::real(s);
  }
  const auto& items = v.asList().items;
  bool anyComplex = false;
  bool allInt = true;
  for (const auto& item : items) {
    anyComplex = anyComplex || item.isComplex();
    allInt = allInt && item.isInt();
  }
  if (anyComplex) {
    Complex s{};
    for (const auto& item : items) s += item.toComplex();
    return Value::complex(s);
  }
  if (allInt && !items.empty()) {
    std::int64_t s = 0;
    for (const auto& item : items) {
      if (__builtin_add_overflow(s, item.asInt(), &s)) throw Error(ErrorKind::EvalError, "integer overflow in sum");
    }
    return Value::integer(s);
  }
  double s = 0.0;
  for (const auto& item : items) s += item.toDouble();
  return Value::real(s);
}

}  // namespace

void registerBuiltins(IntrinsicRegistry& registry) {
  registry.add(unary(
      "abs",
      [](const TypeDesc& t, std::string& why) -> std::optional<TypeDesc> {
        if (t.kind == Kind::Int) return TypeDesc::integer();
        return toReal(t, why);
      },
      [](const Value& v) {
        if (v.isInt()) {
          if (v.asInt() == INT64_MIN) throw Error(ErrorKind::EvalError, "integer overflow in abs");
          return Value::integer(v.asInt() < 0 ? -v.asInt() : v.asInt());
        }
        if (v.isComplex()) return Value::real(std::abs(v.asComplex()));
        return Value::real(std::fabs(v.toDouble()));
      }));
  registry.add(unary("abs2", toReal, [](const Value& v) { return Value::real(std::norm(v.toComplex())); }));
  registry.add(unary("re", toReal, [](const Value& v) { return Value::real(v.toComplex().real()); }));
  registry.add(unary("im", toReal, [](const Value& v) { return Value::real(v.toComplex().imag()); }));
  registry.add(unary(
      "conj",
      [](const TypeDesc& t, std::string& why) -> std::optional<TypeDesc> {
        if (numericOrComplex(t)) return TypeDesc::complex();
        why = "expected a number, got " + toString(t);
        return std::nullopt;
      },
      [](const Value& v) { return Value::complex(std::conj(v.toComplex())); }));
  registry.add(analyticFn(
      "exp", [](double x) { return std::exp(x); }, [](const Complex& z) { return std::exp(z); }));
  registry.add(analyticFn(
      "cos", [](double x) { return std::cos(x); }, [](const Complex& z) { return std::cos(z); }));
  registry.add(analyticFn(
      "sin", [](double x) { return std::sin(x); }, [](const Complex& z) { return std::sin(z); }));
  registry.add(analyticFn(
      "sqrt",
      [](double x) {
        if (x < 0.0) throw Error(ErrorKind::EvalError, "sqrt of a negative real");
        return std::sqrt(x);
      },
      [](const Complex& z) { return std::sqrt(z); }));

  Intrinsic complexFn;
  complexFn.name = "complex";
  complexFn.minArgs = 2;
  complexFn.maxArgs = 2;
  complexFn.result = [](std::span<const TypeDesc> args, const Records&, std::string& why) -> std::optional<TypeDesc> {
    if (!args[0].isNumeric() || !args[1].isNumeric()) {
      why = "complex(re, im) takes two real numbers";
      return std::nullopt;
    }
    return TypeDesc::complex();
  };
  complexFn.eval = [](std::span<const Value> args, std::span<const RealFn>, IntrinsicContext&) {
    return Value::complex(Complex(args[0].toDouble(), args[1].toDouble()));
  };
  registry.add(std::move(complexFn));

  registry.add(unary(
      "sum",
      [](const TypeDesc& t, std::string& why) -> std::optional<TypeDesc> {
        if (t.kind == Kind::Vector) return TypeDesc::real();
        if (t.kind == Kind::List && t.element) {
          const auto& e = *t.element;
          if (e.kind == Kind::Int) return TypeDesc::integer();
          if (e.kind == Kind::Real) return TypeDesc::real();
          if (e.kind == Kind::Complex) return TypeDesc::complex();
        }
        why = "sum takes a vector or a list of numbers, got " + toString(t);
        return std::nullopt;
      },
      sumOf));

  registry.add(unary(
      "len",
      [](const TypeDesc& t, std::string& why) -> std::optional<TypeDesc> {
        if (t.kind == Kind::Vector || t.kind == Kind::List || t.kind == Kind::CGrid || t.kind == Kind::Pw) {
          return TypeDesc::integer();
        }
        why = "len takes a vector, list, cgrid or pw collection, got " + toString(t);
        return std::nullopt;
      },
      [](const Value& v) {
        switch (v.kind()) {
          case Kind::Vector: return Value::integer(static_cast<std::int64_t>(v.asVector().items.size()));
          case Kind::List: return Value::integer(static_cast<std::int64_t>(v.asList().items.size()));
          case Kind::CGrid: return Value::integer(static_cast<std::int64_t>(v.asGrid().cells.size()));
          default: return Value::integer(static_cast<std::int64_t>(v.asPw().pathCount()));
        }
      }));

  registry.add(unary(
      "laplacian",
      [](const TypeDesc& t, std::string& why) -> std::optional<TypeDesc> {
        if (t.kind == Kind::CGrid) return TypeDesc::cgrid(t.length, t.dx);
        why = "laplacian takes a cgrid, got " + toString(t);
        return std::nullopt;
      },
      [](const Value& v) {
        const auto& g = v.asGrid();
        const std::size_t n = g.cells.size();
        const double inv = 1.0 / (g.dx * g.dx);
        std::vector<Complex> out(n);
        for (std::size_t j = 0; j < n; ++j) {
          const Complex left = g.cells[(j + n - 1) % n];
          const Complex right = g.cells[(j + 1) % n];
          out[j] = (left - 2.0 * g.cells[j] + right) * inv;
        }
        return Value::grid(std::move(out), g.dx);
      }));
}

}  // namespace causal
