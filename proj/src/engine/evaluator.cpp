#include "causal/engine/evaluator.hpp"

#include <cmath>

#include "causal/engine/intrinsic.hpp"

namespace causal {

using cml::BinaryOp;
using cml::Expr;
using cml::ExprKind;
using cml::MemberMode;
using cml::RangeKind;
using cml::StmtKind;
using cml::SymbolKind;

namespace {

std::string where(SourceLoc loc, const std::string& law) {
  std::string out = law.empty() ? "" : "law '" + law + "' ";
  out += "at " + std::to_string(loc.line) + ":" + std::to_string(loc.column);
  return out;
}

}  // namespace

EvalError::EvalError(std::string message, SourceLoc loc, std::string law)
    : Error(ErrorKind::EvalError, where(loc, law) + ": " + message, law),
      loc_(loc),
      law_(std::move(law)),
      detail_(std::move(message)) {}

Value coerce(const Value& v, const TypeDesc& target, const std::map<std::string, RecordDecl>& records) {
  auto mismatch = [&]() -> Error {
    return Error(ErrorKind::TypeMismatch, "cannot convert " + kindName(v.kind()) + " to " + toString(target));
  };
  switch (target.kind) {
    case TypeDesc::Kind::Real:
      if (v.isReal()) return v;
      if (v.isInt()) return Value::real(static_cast<double>(v.asInt()));
      throw mismatch();
    case TypeDesc::Kind::Int:
    case TypeDesc::Kind::Bool:
      if (v.kind() != target.kind) throw mismatch();
      return v;
    case TypeDesc::Kind::Complex:
      if (v.isComplex() || v.isReal() || v.isInt()) return Value::complex(v.toComplex());
      throw mismatch();
    case TypeDesc::Kind::Vector: {
      std::vector<double> xs;
      if (v.kind() == TypeDesc::Kind::Vector) {
        xs = v.asVector().items;
      } else if (v.kind() == TypeDesc::Kind::List) {
        for (const auto& item : v.asList().items) {
          if (!item.isReal() && !item.isInt()) throw mismatch();
          xs.push_back(item.toDouble());
        }
      } else {
        throw mismatch();
      }
      if (xs.size() != target.length) {
        throw Error(ErrorKind::TypeMismatch, "vector length " + std::to_string(xs.size()) + " does not match " +
                                                 toString(target));
      }
      return Value::vector(std::move(xs));
    }
    case TypeDesc::Kind::List: {
      std::vector<Value> items;
      if (v.kind() == TypeDesc::Kind::List) {
        items.reserve(v.asList().items.size());
        for (const auto& item : v.asList().items) items.push_back(coerce(item, *target.element, records));
      } else if (v.kind() == TypeDesc::Kind::Vector) {
        for (double x : v.asVector().items) items.push_back(coerce(Value::real(x), *target.element, records));
      } else {
        throw mismatch();
      }
      return Value::list(std::move(items));
    }
    case TypeDesc::Kind::Record: {
      if (v.kind() != TypeDesc::Kind::Record || v.asRecord().name != target.recordName) throw mismatch();
      const auto& decl = records.at(target.recordName);
      const auto& rec = v.asRecord();
      if (rec.members.size() != decl.members.size()) throw mismatch();
      std::vector<std::pair<std::string, Value>> members;
      members.reserve(rec.members.size());
      for (std::size_t i = 0; i < rec.members.size(); ++i) {
        members.emplace_back(decl.members[i].first, coerce(rec.members[i].second, decl.members[i].second, records));
      }
      return Value::record(decl.name, std::move(members));
    }
    case TypeDesc::Kind::CGrid:
      if (v.kind() != TypeDesc::Kind::CGrid || v.asGrid().cells.size() != target.length) throw mismatch();
      if (v.asGrid().dx != target.dx) {
        throw Error(ErrorKind::TypeMismatch, "grid spacing does not match " + toString(target));
      }
      return v;
    case TypeDesc::Kind::Pw:
      if (!conforms(v, target, records)) throw mismatch();
      return v;
  }
  throw mismatch();
}

namespace {

[[noreturn]] void fail(const Expr& e, const EvalEnv& env, const std::string& message) {
  throw EvalError(message, e.loc, env.law);
}

Value arithmetic(const Expr& e, BinaryOp op, const Value& a, const Value& b, const EvalEnv& env) {
  if (a.isComplex() || b.isComplex()) {
    const Complex x = a.toComplex();
    const Complex y = b.toComplex();
    switch (op) {
      case BinaryOp::Add: return Value::complex(x + y);
      case BinaryOp::Sub: return Value::complex(x - y);
      case BinaryOp::Mul: return Value::complex(x * y);
      case BinaryOp::Div:
        if (y == Complex(0.0, 0.0)) fail(e, env, "division by zero");
        return Value::complex(x / y);
      case BinaryOp::Pow: return Value::complex(std::pow(x, y));
      default: break;
    }
  }
  if (a.isInt() && b.isInt() && (op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul)) {
    std::int64_t r = 0;
    bool overflow = false;
    if (op == BinaryOp::Add) overflow = __builtin_add_overflow(a.asInt(), b.asInt(), &r);
    if (op == BinaryOp::Sub) overflow = __builtin_sub_overflow(a.asInt(), b.asInt(), &r);
    if (op == BinaryOp::Mul) overflow = __builtin_mul_overflow(a.asInt(), b.asInt(), &r);
    if (overflow) fail(e, env, "integer overflow");
    return Value::integer(r);
  }
  const double x = a.toDouble();
  const double y = b.toDouble();
  switch (op) {
    case BinaryOp::Add: return Value::real(x + y);
    case BinaryOp::Sub: return Value::real(x - y);
    case BinaryOp::Mul: return Value::real(x * y);
    case BinaryOp::Div:
      if (y == 0.0) fail(e, env, "division by zero");
      return Value::real(x / y);
    case BinaryOp::Pow: return Value::real(std::pow(x, y));
    default: break;
  }
  fail(e, env, "invalid arithmetic operator");
}

bool equalValues(const Value& a, const Value& b) {
  if (a.isInt() && b.isInt()) return a.asInt() == b.asInt();
  if ((a.isInt() || a.isReal()) && (b.isInt() || b.isReal())) return a.toDouble() == b.toDouble();
  if ((a.isComplex() || b.isComplex()) && (a.isComplex() || a.isReal() || a.isInt()) &&
      (b.isComplex() || b.isReal() || b.isInt())) {
    return a.toComplex() == b.toComplex();
  }
  return a == b;
}

bool compare(BinaryOp op, const Value& a, const Value& b) {
  if (a.isInt() && b.isInt()) {
    const auto x = a.asInt();
    const auto y = b.asInt();
    switch (op) {
      case BinaryOp::Lt: return x < y;
      case BinaryOp::Le: return x <= y;
      case BinaryOp::Gt: return x > y;
      default: return x >= y;
    }
  }
  const double x = a.toDouble();
  const double y = b.toDouble();
  switch (op) {
    case BinaryOp::Lt: return x < y;
    case BinaryOp::Le: return x <= y;
    case BinaryOp::Gt: return x > y;
    default: return x >= y;
  }
}

std::size_t checkedIndex(const Expr& e, const EvalEnv& env, const Value& idx, std::size_t size) {
  const auto i = idx.asInt();
  if (i < 0 || static_cast<std::uint64_t>(i) >= size) {
    fail(e, env, "index " + std::to_string(i) + " out of range (length " + std::to_string(size) + ")");
  }
  return static_cast<std::size_t>(i);
}

Value pwAttributeValues(const Expr& e, const EvalEnv& env, const PwCollection& pw) {
  if (pw.pathCount() != 1) {
    fail(e, env, "attribute '" + e.text + "' needs a collapsed pw collection, found " +
                     std::to_string(pw.pathCount()) + " paths");
  }
  const auto attr = e.memberIndex;
  const auto kind = pw.attributes()[attr].type.kind;
  std::vector<Value> out;
  for (std::size_t k = 0; k < pw.particleCount(); ++k) {
    const double x = pw.value(0, k, attr);
    if (kind == TypeDesc::Kind::Int) {
      out.push_back(Value::integer(static_cast<std::int64_t>(x)));
    } else if (kind == TypeDesc::Kind::Bool) {
      out.push_back(Value::boolean(x != 0.0));
    } else {
      out.push_back(Value::real(x));
    }
  }
  return Value::list(std::move(out));
}

Value randomDraw(const Expr& e, EvalEnv& env) {
  RandomSpec spec;
  if (e.rangeKind == RangeKind::Interval) {
    spec.range = RandomSpec::Range::Interval;
    spec.lo = evaluate(*e.rangeItems[0], env).toDouble();
    spec.hi = evaluate(*e.rangeItems[1], env).toDouble();
  } else if (e.rangeKind == RangeKind::Set) {
    spec.range = RandomSpec::Range::Finite;
    for (const auto& item : e.rangeItems) {
      spec.values.push_back(coerce(evaluate(*item, env), *e.type, env.schema->records));
    }
  } else {
    spec.range = RandomSpec::Range::Unbounded;
  }
  std::vector<Value> params;
  for (const auto& a : e.distArgs) {
    Value v = evaluate(*a, env);
    if (e.distArgs.size() == 1 && (v.kind() == TypeDesc::Kind::List || v.kind() == TypeDesc::Kind::Vector)) {
      if (v.kind() == TypeDesc::Kind::Vector) {
        for (double x : v.asVector().items) params.push_back(Value::real(x));
      } else {
        params = v.asList().items;
      }
    } else {
      params.push_back(std::move(v));
    }
  }
  if (e.distName == "FLAT") {
    spec.dist = RandomSpec::Dist::Flat;
  } else if (e.distName == "GAUSS") {
    spec.dist = RandomSpec::Dist::Gauss;
    spec.mean = params.at(0).toDouble();
    spec.sigma = params.at(1).toDouble();
  } else if (e.distName == "WEIGHTS") {
    spec.dist = RandomSpec::Dist::Weights;
    for (const auto& p : params) spec.weights.push_back(p.toDouble());
  } else {
    spec.dist = RandomSpec::Dist::Psi;
    for (const auto& p : params) spec.amplitudes.push_back(p.toComplex());
  }
  if (!env.random) fail(e, env, "random is only available inside transition and init blocks");
  try {
    spec.validate();
  } catch (const Error& err) {
    throw Error(ErrorKind::RandomError, std::string(err.what()) + " (" + where(e.loc, env.law) + ")", env.law);
  }
  return env.random->draw(spec);
}

Value call(const Expr& e, EvalEnv& env) {
  const Intrinsic* fn = e.intrinsic;
  if (!fn) fail(e, env, "unresolved function '" + e.text + "'");
  std::vector<Value> args;
  std::vector<RealFn> fns;
  args.reserve(e.args.size());
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const Expr& a = *e.args[i];
    if (a.kind == ExprKind::Lambda) {
      const Expr* lambda = &a;
      fns.push_back([lambda, &env](double x) {
        const std::size_t slot = lambda->symbolIndex;
        if (env.locals.size() <= slot) env.locals.resize(slot + 1);
        env.locals[slot] = LocalBinding{Value::real(x), std::nullopt};
        return evaluate(*lambda->args[0], env).toDouble();
      });
      args.push_back(Value::real(0.0));
    } else {
      args.push_back(evaluate(a, env));
    }
  }
  IntrinsicContext ctx{env.dt, env.random, env.law};
  try {
    return fn->eval(args, fns, ctx);
  } catch (const EvalError&) {
    throw;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::RandomError || err.kind() == ErrorKind::ContinuousRandomNotBranchable) throw;
    fail(e, env, e.text + ": " + std::string(toString(err.kind())) + ": " + err.what());
  }
}

}  // namespace

Value evaluate(const Expr& e, EvalEnv& env) {
  switch (e.kind) {
    case ExprKind::Literal: return e.literal;
    case ExprKind::Name:
      switch (e.symbol) {
        case SymbolKind::Field:
          if (!env.s0) fail(e, env, "field '" + e.text + "' is not available here");
          return env.s0->value(e.symbolIndex);
        case SymbolKind::Constant: return env.schema->constantValues.at(e.symbolIndex);
        case SymbolKind::Local: return env.locals.at(e.symbolIndex).value;
        case SymbolKind::Dt: return Value::real(env.dt);
        case SymbolKind::Time: return Value::real(env.s0 ? env.s0->time() : 0.0);
        case SymbolKind::Unresolved: break;
      }
      fail(e, env, "unresolved name '" + e.text + "'");
    case ExprKind::Member: {
      const Value base = evaluate(*e.args[0], env);
      switch (e.memberMode) {
        case MemberMode::Record: return base.asRecord().members.at(e.memberIndex).second;
        case MemberMode::OverList: {
          std::vector<Value> out;
          out.reserve(base.asList().items.size());
          for (const auto& item : base.asList().items) out.push_back(item.asRecord().members.at(e.memberIndex).second);
          return Value::list(std::move(out));
        }
        case MemberMode::PwAttribute: return pwAttributeValues(e, env, base.asPw());
      }
      fail(e, env, "bad member access");
    }
    case ExprKind::Index: {
      const Value base = evaluate(*e.args[0], env);
      const Value idx = evaluate(*e.args[1], env);
      switch (base.kind()) {
        case TypeDesc::Kind::List: {
          const auto& items = base.asList().items;
          return items[checkedIndex(e, env, idx, items.size())];
        }
        case TypeDesc::Kind::Vector: {
          const auto& items = base.asVector().items;
          return Value::real(items[checkedIndex(e, env, idx, items.size())]);
        }
        case TypeDesc::Kind::CGrid: {
          const auto& cells = base.asGrid().cells;
          return Value::complex(cells[checkedIndex(e, env, idx, cells.size())]);
        }
        default: fail(e, env, "value is not indexable");
      }
    }
    case ExprKind::Unary: {
      const Value v = evaluate(*e.args[0], env);
      if (e.unaryOp == cml::UnaryOp::Not) return Value::boolean(!v.asBool());
      if (v.isInt()) {
        if (v.asInt() == INT64_MIN) fail(e, env, "integer overflow");
        return Value::integer(-v.asInt());
      }
      if (v.isComplex()) return Value::complex(-v.asComplex());
      return Value::real(-v.toDouble());
    }
    case ExprKind::Binary: {
      if (e.binaryOp == BinaryOp::And) {
        return Value::boolean(evaluateBool(*e.args[0], env) && evaluateBool(*e.args[1], env));
      }
      if (e.binaryOp == BinaryOp::Or) {
        return Value::boolean(evaluateBool(*e.args[0], env) || evaluateBool(*e.args[1], env));
      }
      const Value a = evaluate(*e.args[0], env);
      const Value b = evaluate(*e.args[1], env);
      switch (e.binaryOp) {
        case BinaryOp::Eq: return Value::boolean(equalValues(a, b));
        case BinaryOp::Ne: return Value::boolean(!equalValues(a, b));
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return Value::boolean(compare(e.binaryOp, a, b));
        default: return arithmetic(e, e.binaryOp, a, b, env);
      }
    }
    case ExprKind::Call: return call(e, env);
    case ExprKind::ListLit: {
      std::vector<Value> items;
      items.reserve(e.args.size());
      for (const auto& a : e.args) {
        Value v = evaluate(*a, env);
        if (e.type && e.type->element) v = coerce(v, *e.type->element, env.schema->records);
        items.push_back(std::move(v));
      }
      return Value::list(std::move(items));
    }
    case ExprKind::RecordLit: {
      const auto& decl = env.schema->records.at(e.text);
      std::vector<std::pair<std::string, Value>> members;
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        try {
          members.emplace_back(decl.members[i].first,
                               coerce(evaluate(*e.args[i], env), decl.members[i].second, env.schema->records));
        } catch (const EvalError&) {
          throw;
        } catch (const Error& err) {
          fail(*e.args[i], env, err.what());
        }
      }
      return Value::record(decl.name, std::move(members));
    }
    case ExprKind::Random: return randomDraw(e, env);
    case ExprKind::Lambda: fail(e, env, "a function literal is only valid as an intrinsic argument");
  }
  fail(e, env, "unsupported expression");
}

bool evaluateBool(const Expr& e, EvalEnv& env) {
  const Value v = evaluate(e, env);
  if (!v.isBool()) fail(e, env, "expected a bool, got " + kindName(v.kind()));
  return v.asBool();
}

namespace {

WritePath resolvePath(const Expr& e, EvalEnv& env) {
  switch (e.kind) {
    case ExprKind::Name:
      if (e.symbol == SymbolKind::Field) return WritePath{e.symbolIndex, {}};
      if (e.symbol == SymbolKind::Local && env.locals.at(e.symbolIndex).write) {
        return *env.locals[e.symbolIndex].write;
      }
      fail(e, env, "'" + e.text + "' is not assignable");
    case ExprKind::Member: {
      WritePath p = resolvePath(*e.args[0], env);
      p.steps.push_back({true, e.memberIndex});
      return p;
    }
    case ExprKind::Index: {
      WritePath p = resolvePath(*e.args[0], env);
      const auto i = evaluate(*e.args[1], env).asInt();
      if (i < 0) fail(e, env, "index " + std::to_string(i) + " out of range");
      p.steps.push_back({false, static_cast<std::size_t>(i)});
      return p;
    }
    default: fail(e, env, "expression is not assignable");
  }
}

void writeAt(Value& target, const WritePath& path, std::size_t k, Value v, const Expr& e, const EvalEnv& env) {
  if (k == path.steps.size()) {
    target = std::move(v);
    return;
  }
  const auto& step = path.steps[k];
  if (step.member) {
    writeAt(target.asRecord().members.at(step.index).second, path, k + 1, std::move(v), e, env);
    return;
  }
  auto outOfRange = [&](std::size_t size) {
    fail(e, env, "index " + std::to_string(step.index) + " out of range (length " + std::to_string(size) + ")");
  };
  switch (target.kind()) {
    case TypeDesc::Kind::List: {
      auto& items = target.asList().items;
      if (step.index >= items.size()) outOfRange(items.size());
      writeAt(items[step.index], path, k + 1, std::move(v), e, env);
      return;
    }
    case TypeDesc::Kind::Vector: {
      auto& items = target.asVector().items;
      if (step.index >= items.size()) outOfRange(items.size());
      items[step.index] = v.toDouble();
      return;
    }
    case TypeDesc::Kind::CGrid: {
      auto& cells = target.asGrid().cells;
      if (step.index >= cells.size()) outOfRange(cells.size());
      cells[step.index] = v.toComplex();
      return;
    }
    default: fail(e, env, "value is not indexable");
  }
}

}  // namespace

void execute(const cml::Block& block, EvalEnv& env, SystemState& s1, std::vector<bool>* written) {
  for (const auto& stmt : block) {
    switch (stmt->kind) {
      case StmtKind::Assign: {
        Value v = evaluate(*stmt->value, env);
        const WritePath path = resolvePath(*stmt->target, env);
        if (stmt->target->type) {
          try {
            v = coerce(v, *stmt->target->type, env.schema->records);
          } catch (const Error& err) {
            fail(*stmt->value, env, err.what());
          }
        }
        writeAt(s1.mutableValues().at(path.field), path, 0, std::move(v), *stmt->target, env);
        if (written) written->at(path.field) = true;
        break;
      }
      case StmtKind::For: {
        const Value iterable = evaluate(*stmt->value, env);
        std::optional<WritePath> base;
        if (stmt->varWritable) base = resolvePath(*stmt->value, env);
        std::vector<Value> items;
        if (iterable.kind() == TypeDesc::Kind::Vector) {
          for (double x : iterable.asVector().items) items.push_back(Value::real(x));
        } else {
          items = iterable.asList().items;
        }
        const std::size_t slot = stmt->slot;
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (env.locals.size() <= slot) env.locals.resize(slot + 1);
          LocalBinding binding{std::move(items[i]), std::nullopt};
          if (base) {
            WritePath p = *base;
            p.steps.push_back({false, i});
            binding.write = std::move(p);
          }
          env.locals[slot] = std::move(binding);
          execute(stmt->body, env, s1, written);
          env.locals.resize(slot + 1);
        }
        if (env.locals.size() > slot) env.locals.resize(slot);
        break;
      }
      case StmtKind::If:
        if (evaluateBool(*stmt->value, env)) {
          execute(stmt->body, env, s1, written);
        } else if (stmt->hasElse) {
          execute(stmt->elseBody, env, s1, written);
        }
        break;
    }
  }
}

}  // namespace causal
