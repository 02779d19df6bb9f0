#include "causal/cml/typecheck.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "causal/engine/evaluator.hpp"

namespace causal::cml {

namespace {

using Kind = TypeDesc::Kind;

enum class Context { Const, Guard, Transition, Init, Halt, Outcome, Observable };

bool randomAllowed(Context c) { return c == Context::Transition || c == Context::Init; }

std::string contextName(Context c) {
  switch (c) {
    case Context::Const: return "a constant";
    case Context::Guard: return "a guard";
    case Context::Transition: return "a transition";
    case Context::Init: return "the init block";
    case Context::Halt: return "the halt condition";
    case Context::Outcome: return "the outcome expression";
    case Context::Observable: return "an observable";
  }
  return "";
}

struct Local {
  std::string name;
  TypeDesc type;
  bool writable = false;
};

class Checker {
 public:
  Checker(const IntrinsicRegistry& registry, StateSchema& schema) : registry_(registry), schema_(schema) {}

  std::vector<Diagnostic> diags;

  void error(std::string code, std::string message, SourceLoc loc) {
    diags.push_back({Diagnostic::Severity::Error, std::move(code), std::move(message), loc});
  }

  void warning(std::string code, std::string message, SourceLoc loc) {
    diags.push_back({Diagnostic::Severity::Warning, std::move(code), std::move(message), loc});
  }

  // ---- types ---------------------------------------------------------------

  bool checkType(const TypeDesc& t, SourceLoc loc) {
    try {
      t.validate();
    } catch (const Error& err) {
      error("InvalidType", err.what(), loc);
      return false;
    }
    return checkRecordRefs(t, loc);
  }

  bool checkRecordRefs(const TypeDesc& t, SourceLoc loc) {
    if (t.kind == Kind::List) return checkRecordRefs(*t.element, loc);
    if (t.kind == Kind::Record && !schema_.records.count(t.recordName)) {
      error("UnknownType", "unknown type '" + t.recordName + "'", loc);
      return false;
    }
    return true;
  }

  bool assignable(const TypeDesc& from, const TypeDesc& to) const {
    switch (to.kind) {
      case Kind::Real: return from.isNumeric();
      case Kind::Int: return from.kind == Kind::Int;
      case Kind::Bool: return from.kind == Kind::Bool;
      case Kind::Complex: return from.isNumeric() || from.kind == Kind::Complex;
      case Kind::Vector:
        if (from.kind == Kind::Vector) return from.length == to.length;
        return from.kind == Kind::List && from.element && from.element->isNumeric();
      case Kind::List:
        if (from.kind == Kind::Vector) return assignable(TypeDesc::real(), *to.element);
        return from.kind == Kind::List && (!from.element || assignable(*from.element, *to.element));
      case Kind::Record: return from.kind == Kind::Record && from.recordName == to.recordName;
      case Kind::CGrid: return from.kind == Kind::CGrid && from.length == to.length && from.dx == to.dx;
      case Kind::Pw: return from.sameType(to);
    }
    return false;
  }

  // ---- expressions -----------------------------------------------------------

  std::optional<TypeDesc> check(Expr& e, Context ctx) {
    auto t = checkInner(e, ctx);
    if (t) e.type = *t;
    return t;
  }

  std::optional<TypeDesc> checkInner(Expr& e, Context ctx) {
    switch (e.kind) {
      case ExprKind::Literal:
        if (e.literal.isInt()) return TypeDesc::integer();
        if (e.literal.isBool()) return TypeDesc::boolean();
        return TypeDesc::real();
      case ExprKind::Name: return checkName(e, ctx);
      case ExprKind::Member: return checkMember(e, ctx);
      case ExprKind::Index: return checkIndex(e, ctx);
      case ExprKind::Unary: return checkUnary(e, ctx);
      case ExprKind::Binary: return checkBinary(e, ctx);
      case ExprKind::Call: return checkCall(e, ctx);
      case ExprKind::ListLit: return checkList(e, ctx);
      case ExprKind::RecordLit: return checkRecord(e, ctx);
      case ExprKind::Random: return checkRandom(e, ctx);
      case ExprKind::Lambda:
        error("TypeMismatch", "a function literal is only valid as an intrinsic argument", e.loc);
        return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<TypeDesc> checkName(Expr& e, Context ctx) {
    for (std::size_t i = locals_.size(); i-- > 0;) {
      if (locals_[i].name == e.text) {
        e.symbol = SymbolKind::Local;
        e.symbolIndex = i;
        return locals_[i].type;
      }
    }
    if (ctx != Context::Const) {
      if (e.text == "dt") {
        e.symbol = SymbolKind::Dt;
        return TypeDesc::real();
      }
      if (e.text == "time") {
        e.symbol = SymbolKind::Time;
        return TypeDesc::real();
      }
      if (auto i = schema_.fieldIndex(e.text)) {
        e.symbol = SymbolKind::Field;
        e.symbolIndex = *i;
        return schema_.fields[*i].second;
      }
    }
    if (auto i = schema_.constantIndex(e.text)) {
      e.symbol = SymbolKind::Constant;
      e.symbolIndex = *i;
      return schema_.constantTypes[*i].second;
    }
    if (ctx == Context::Const && (schema_.fieldIndex(e.text) || e.text == "dt" || e.text == "time")) {
      error("UnknownName", "'" + e.text + "' cannot be used in a constant initializer", e.loc);
    } else {
      error("UnknownName", "unknown name '" + e.text + "'", e.loc);
    }
    return std::nullopt;
  }

  std::optional<TypeDesc> checkMember(Expr& e, Context ctx) {
    auto base = check(*e.args[0], ctx);
    if (!base) return std::nullopt;
    if (base->kind == Kind::Record) {
      const auto& decl = schema_.records.at(base->recordName);
      auto idx = decl.memberIndex(e.text);
      if (!idx) {
        error("UnknownMember", "record " + decl.name + " has no member '" + e.text + "'", e.loc);
        return std::nullopt;
      }
      e.memberMode = MemberMode::Record;
      e.memberIndex = *idx;
      return decl.members[*idx].second;
    }
    if (base->kind == Kind::List && base->element->kind == Kind::Record) {
      const auto& decl = schema_.records.at(base->element->recordName);
      auto idx = decl.memberIndex(e.text);
      if (!idx) {
        error("UnknownMember", "record " + decl.name + " has no member '" + e.text + "'", e.loc);
        return std::nullopt;
      }
      e.memberMode = MemberMode::OverList;
      e.memberIndex = *idx;
      return TypeDesc::list(decl.members[*idx].second);
    }
    if (base->kind == Kind::Pw) {
      for (std::size_t i = 0; i < base->pwAttrs.size(); ++i) {
        if (base->pwAttrs[i].name == e.text) {
          e.memberMode = MemberMode::PwAttribute;
          e.memberIndex = i;
          TypeDesc elem = base->pwAttrs[i].type;
          elem.domain.reset();
          return TypeDesc::list(elem);
        }
      }
      error("UnknownMember", "pw collection has no attribute '" + e.text + "'", e.loc);
      return std::nullopt;
    }
    error("TypeMismatch", "member access '." + e.text + "' on a value of type " + toString(*base), e.loc);
    return std::nullopt;
  }

  std::optional<TypeDesc> checkIndex(Expr& e, Context ctx) {
    auto base = check(*e.args[0], ctx);
    auto idx = check(*e.args[1], ctx);
    if (!base || !idx) return std::nullopt;
    if (idx->kind != Kind::Int) {
      error("TypeMismatch", "index must be int, got " + toString(*idx), e.args[1]->loc);
      return std::nullopt;
    }
    switch (base->kind) {
      case Kind::List: return *base->element;
      case Kind::Vector: return TypeDesc::real();
      case Kind::CGrid: return TypeDesc::complex();
      default:
        error("TypeMismatch", "cannot index a value of type " + toString(*base), e.loc);
        return std::nullopt;
    }
  }

  std::optional<TypeDesc> checkUnary(Expr& e, Context ctx) {
    auto t = check(*e.args[0], ctx);
    if (!t) return std::nullopt;
    if (e.unaryOp == UnaryOp::Not) {
      if (t->kind != Kind::Bool) {
        error("TypeMismatch", "'!' needs a bool operand, got " + toString(*t), e.loc);
        return std::nullopt;
      }
      return TypeDesc::boolean();
    }
    if (t->kind == Kind::Int) return TypeDesc::integer();
    if (t->kind == Kind::Real) return TypeDesc::real();
    if (t->kind == Kind::Complex) return TypeDesc::complex();
    error("TypeMismatch", "'-' needs a numeric operand, got " + toString(*t), e.loc);
    return std::nullopt;
  }

  std::optional<TypeDesc> checkBinary(Expr& e, Context ctx) {
    auto a = check(*e.args[0], ctx);
    auto b = check(*e.args[1], ctx);
    if (!a || !b) return std::nullopt;
    const BinaryOp op = e.binaryOp;
    auto opName = [&]() -> std::string {
      static const char* names[] = {"+", "-", "*", "/", "^", "<", "<=", ">", ">=", "==", "!=", "&&", "||"};
      return names[static_cast<int>(op)];
    };
    auto mismatch = [&]() {
      error("TypeMismatch",
            "operator '" + opName() + "' cannot combine " + toString(*a) + " and " + toString(*b), e.loc);
      return std::nullopt;
    };
    auto scalarNum = [](const TypeDesc& t) { return t.isNumeric() || t.kind == Kind::Complex; };
    switch (op) {
      case BinaryOp::And:
      case BinaryOp::Or:
        if (a->kind != Kind::Bool || b->kind != Kind::Bool) return mismatch();
        return TypeDesc::boolean();
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (!a->isNumeric() || !b->isNumeric()) return mismatch();
        return TypeDesc::boolean();
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (scalarNum(*a) && scalarNum(*b)) return TypeDesc::boolean();
        if (!a->sameType(*b)) return mismatch();
        return TypeDesc::boolean();
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
        if (!scalarNum(*a) || !scalarNum(*b)) return mismatch();
        if (a->kind == Kind::Complex || b->kind == Kind::Complex) return TypeDesc::complex();
        if (a->kind == Kind::Int && b->kind == Kind::Int) return TypeDesc::integer();
        return TypeDesc::real();
      case BinaryOp::Div:
      case BinaryOp::Pow:
        if (!scalarNum(*a) || !scalarNum(*b)) return mismatch();
        if (a->kind == Kind::Complex || b->kind == Kind::Complex) return TypeDesc::complex();
        return TypeDesc::real();
    }
    return mismatch();
  }

  std::optional<TypeDesc> checkCall(Expr& e, Context ctx) {
    const Intrinsic* fn = registry_.find(e.text);
    if (!fn) {
      for (auto& a : e.args) {
        if (a->kind != ExprKind::Lambda) check(*a, ctx);
      }
      error("UnknownIntrinsic", "unknown function '" + e.text + "'", e.loc);
      return std::nullopt;
    }
    e.intrinsic = fn;
    if (e.args.size() < fn->minArgs || e.args.size() > fn->maxArgs) {
      const std::string expected = fn->minArgs == fn->maxArgs
                                       ? std::to_string(fn->minArgs)
                                       : std::to_string(fn->minArgs) + " to " + std::to_string(fn->maxArgs);
      error("ArityMismatch",
            e.text + " takes " + expected + " argument(s), got " + std::to_string(e.args.size()), e.loc);
      return std::nullopt;
    }
    if (fn->stochastic && !randomAllowed(ctx)) {
      error(ctx == Context::Guard ? "RandomInGuard" : "RandomNotAllowed",
            "stochastic function '" + e.text + "' cannot be used in " + contextName(ctx), e.loc);
      return std::nullopt;
    }
    std::vector<TypeDesc> types;
    bool ok = true;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      Expr& a = *e.args[i];
      if (fn->takesLambda(i)) {
        if (a.kind != ExprKind::Lambda) {
          error("TypeMismatch", "argument " + std::to_string(i + 1) + " of " + e.text +
                                    " must be a function literal 'x -> expr'", a.loc);
          ok = false;
          continue;
        }
        a.symbolIndex = locals_.size();
        locals_.push_back({a.text, TypeDesc::real(), false});
        auto body = check(*a.args[0], ctx);
        locals_.pop_back();
        if (body && !body->isNumeric()) {
          error("TypeMismatch", "function literal must return a number, got " + toString(*body), a.args[0]->loc);
          ok = false;
        }
        if (!body) ok = false;
        a.type = TypeDesc::real();
        types.push_back(TypeDesc::real());
        continue;
      }
      if (a.kind == ExprKind::Lambda) {
        error("TypeMismatch", "argument " + std::to_string(i + 1) + " of " + e.text + " cannot be a function literal",
              a.loc);
        ok = false;
        continue;
      }
      auto t = check(a, ctx);
      if (!t) {
        ok = false;
        continue;
      }
      types.push_back(*t);
    }
    if (!ok) return std::nullopt;
    std::string why;
    auto result = fn->result(types, schema_.records, why);
    if (!result) {
      error("TypeMismatch", e.text + ": " + why, e.loc);
      return std::nullopt;
    }
    return result;
  }

  std::optional<TypeDesc> checkList(Expr& e, Context ctx) {
    if (e.args.empty()) {
      TypeDesc t;
      t.kind = Kind::List;
      return t;
    }
    std::optional<TypeDesc> elem;
    bool ok = true;
    for (auto& a : e.args) {
      auto t = check(*a, ctx);
      if (!t) {
        ok = false;
        continue;
      }
      TypeDesc plain = *t;
      plain.domain.reset();
      if (!elem) {
        elem = plain;
      } else if (elem->isNumeric() && plain.isNumeric()) {
        if (plain.kind == Kind::Real) elem = TypeDesc::real();
      } else if ((elem->kind == Kind::Complex && (plain.isNumeric() || plain.kind == Kind::Complex)) ||
                 (plain.kind == Kind::Complex && elem->isNumeric())) {
        elem = TypeDesc::complex();
      } else if (!elem->sameType(plain)) {
        error("TypeMismatch", "list items must share a type: " + toString(*elem) + " vs " + toString(plain),
              a->loc);
        ok = false;
      }
    }
    if (!ok || !elem) return std::nullopt;
    return TypeDesc::list(*elem);
  }

  std::optional<TypeDesc> checkRecord(Expr& e, Context ctx) {
    for (auto& a : e.args) check(*a, ctx);
    auto it = schema_.records.find(e.text);
    if (it == schema_.records.end()) {
      error("UnknownType", "unknown record type '" + e.text + "'", e.loc);
      return std::nullopt;
    }
    const RecordDecl& decl = it->second;
    std::vector<ExprPtr> ordered(decl.members.size());
    bool ok = true;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      auto idx = decl.memberIndex(e.memberNames[i]);
      if (!idx) {
        error("UnknownMember", "record " + decl.name + " has no member '" + e.memberNames[i] + "'", e.args[i]->loc);
        ok = false;
        continue;
      }
      if (ordered[*idx]) {
        error("DuplicateName", "member '" + e.memberNames[i] + "' given twice", e.args[i]->loc);
        ok = false;
        continue;
      }
      ordered[*idx] = e.args[i];
      if (e.args[i]->type && !assignableExpr(*e.args[i], decl.members[*idx].second)) {
        error("TypeMismatch",
              "member '" + e.memberNames[i] + "' expects " + toString(decl.members[*idx].second) + ", got " +
                  toString(*e.args[i]->type),
              e.args[i]->loc);
        ok = false;
      } else if (!e.args[i]->type) {
        ok = false;
      }
    }
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      if (!ordered[i] && ok) {
        error("MissingMember", "record literal " + decl.name + " is missing member '" + decl.members[i].first + "'",
              e.loc);
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    e.args = std::move(ordered);
    e.memberNames.clear();
    for (const auto& m : decl.members) e.memberNames.push_back(m.first);
    return TypeDesc::record(decl.name);
  }

  std::optional<TypeDesc> checkRandom(Expr& e, Context ctx) {
    if (!randomAllowed(ctx)) {
      error(ctx == Context::Guard ? "RandomInGuard" : "RandomNotAllowed",
            "random cannot be used in " + contextName(ctx), e.loc);
      return std::nullopt;
    }
    bool ok = true;
    std::optional<TypeDesc> result;
    if (e.rangeKind == RangeKind::Interval) {
      for (auto& item : e.rangeItems) {
        auto t = check(*item, ctx);
        if (t && !t->isNumeric()) {
          error("TypeMismatch", "interval bounds must be numbers, got " + toString(*t), item->loc);
          ok = false;
        }
        if (!t) ok = false;
      }
      result = TypeDesc::real();
    } else if (e.rangeKind == RangeKind::Set) {
      for (auto& item : e.rangeItems) {
        auto t = check(*item, ctx);
        if (!t) {
          ok = false;
          continue;
        }
        TypeDesc plain = *t;
        plain.domain.reset();
        if (!plain.isScalar()) {
          error("TypeMismatch", "random value sets hold scalars, got " + toString(plain), item->loc);
          ok = false;
        } else if (!result) {
          result = plain;
        } else if (result->isNumeric() && plain.isNumeric()) {
          if (plain.kind == Kind::Real) result = TypeDesc::real();
        } else if (!result->sameType(plain)) {
          error("TypeMismatch", "random value set mixes " + toString(*result) + " and " + toString(plain), item->loc);
          ok = false;
        }
      }
    } else {
      result = TypeDesc::real();
    }

    std::vector<TypeDesc> params;
    for (auto& a : e.distArgs) {
      if (a->kind == ExprKind::Lambda) {
        error("TypeMismatch", "distribution parameters cannot be function literals", a->loc);
        ok = false;
        continue;
      }
      auto t = check(*a, ctx);
      if (!t) {
        ok = false;
        continue;
      }
      params.push_back(*t);
    }
    if (!ok) return std::nullopt;

    const std::string& d = e.distName;
    const bool isSet = e.rangeKind == RangeKind::Set;
    auto distError = [&](const std::string& message) {
      error("TypeMismatch", message, e.distLoc);
      return std::nullopt;
    };
    if (d == "FLAT") {
      if (!params.empty()) return distError("FLAT takes no parameters");
      if (e.rangeKind == RangeKind::None) return distError("FLAT needs a value range");
    } else if (d == "GAUSS") {
      if (isSet) return distError("GAUSS needs an interval or no value range");
      if (params.size() != 2 || !params[0].isNumeric() || !params[1].isNumeric()) {
        return distError("GAUSS takes (mean, sigma)");
      }
    } else if (d == "WEIGHTS" || d == "PSI") {
      if (!isSet) return distError(d + " needs a finite value set '{...}'");
      const bool psi = d == "PSI";
      auto elementOk = [&](const TypeDesc& t) { return t.isNumeric() || (psi && t.kind == Kind::Complex); };
      if (params.size() == 1 && (params[0].kind == Kind::List || params[0].kind == Kind::Vector)) {
        if (params[0].kind == Kind::List && !elementOk(*params[0].element)) {
          return distError(d + " parameters must be " + (psi ? "amplitudes" : "numbers"));
        }
      } else {
        if (params.size() != e.rangeItems.size()) {
          return distError(d + " needs one parameter per value (" + std::to_string(e.rangeItems.size()) + "), got " +
                           std::to_string(params.size()));
        }
        for (const auto& p : params) {
          if (!elementOk(p)) return distError(d + " parameters must be " + (psi ? "amplitudes" : "numbers"));
        }
      }
    } else {
      error("UnknownDistribution", "unknown distribution '" + d + "' (expected FLAT, GAUSS, WEIGHTS or PSI)",
            e.distLoc);
      return std::nullopt;
    }
    return result;
  }

  bool assignableExpr(const Expr& e, const TypeDesc& to) const {
    if (!e.type) return false;
    if (e.kind == ExprKind::ListLit && e.args.empty()) return to.kind == Kind::List || to.kind == Kind::Vector;
    return assignable(*e.type, to);
  }

  // ---- statements ------------------------------------------------------------

  // True when `e` denotes a writable location rooted at a state field.
  bool isLvalue(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Name:
        return e.symbol == SymbolKind::Field || (e.symbol == SymbolKind::Local && locals_[e.symbolIndex].writable);
      case ExprKind::Member: return e.memberMode == MemberMode::Record && isLvalue(*e.args[0]);
      case ExprKind::Index: return isLvalue(*e.args[0]);
      default: return false;
    }
  }

  void checkTarget(Expr& target, Context ctx) {
    auto t = check(target, ctx);
    if (!t) return;
    const Expr* root = &target;
    while (root->kind == ExprKind::Member || root->kind == ExprKind::Index) root = root->args[0].get();
    if (root->kind == ExprKind::Name) {
      if (root->symbol == SymbolKind::Constant) {
        error("AssignToConstant", "cannot assign to constant '" + root->text + "'", target.loc);
        return;
      }
      if (root->symbol == SymbolKind::Dt || root->symbol == SymbolKind::Time) {
        error("AssignToConstant", "cannot assign to '" + root->text + "'", target.loc);
        return;
      }
    }
    if (!isLvalue(target)) {
      error("NotAssignable", "left side of '=' is not an assignable state location", target.loc);
    }
  }

  void checkBlock(Block& block, Context ctx) {
    for (auto& s : block) checkStmt(*s, ctx);
  }

  void checkStmt(Stmt& s, Context ctx) {
    switch (s.kind) {
      case StmtKind::Assign: {
        checkTarget(*s.target, ctx);
        auto v = check(*s.value, ctx);
        if (s.target->type && v && !assignableExpr(*s.value, *s.target->type)) {
          error("TypeMismatch", "cannot assign " + toString(*v) + " to " + toString(*s.target->type), s.value->loc);
        }
        break;
      }
      case StmtKind::For: {
        auto t = check(*s.value, ctx);
        TypeDesc elem = TypeDesc::real();
        if (t) {
          if (t->kind == Kind::List) {
            elem = *t->element;
          } else if (t->kind != Kind::Vector) {
            error("TypeMismatch", "for loops iterate over lists or vectors, got " + toString(*t), s.value->loc);
          }
        }
        s.slot = locals_.size();
        s.varWritable = t && isLvalue(*s.value);
        if (s.var == "dt" || s.var == "time") {
          error("ReservedName", "'" + s.var + "' is reserved", s.varLoc);
        }
        locals_.push_back({s.var, elem, s.varWritable});
        checkBlock(s.body, ctx);
        locals_.pop_back();
        break;
      }
      case StmtKind::If: {
        auto c = check(*s.value, ctx);
        if (c && c->kind != Kind::Bool) {
          error("TypeMismatch", "if condition must be bool, got " + toString(*c), s.value->loc);
        }
        checkBlock(s.body, ctx);
        if (s.hasElse) checkBlock(s.elseBody, ctx);
        break;
      }
    }
  }

  void checkPredicate(Expr& e, Context ctx, const std::string& what) {
    auto t = check(e, ctx);
    if (t && t->kind != Kind::Bool) {
      error("TypeMismatch", what + " must be bool, got " + toString(*t), e.loc);
    }
  }

 private:
  const IntrinsicRegistry& registry_;
  StateSchema& schema_;
  std::vector<Local> locals_;
};

void buildRecords(const ModelAst& ast, StateSchema& schema, Checker& c) {
  for (const auto& r : ast.records) {
    if (schema.records.count(r.name)) {
      c.error("DuplicateName", "record '" + r.name + "' is declared twice", r.loc);
      continue;
    }
    RecordDecl decl;
    decl.name = r.name;
    std::set<std::string> members;
    for (const auto& m : r.members) {
      if (!members.insert(m.name).second) {
        c.error("DuplicateName", "record " + r.name + " declares member '" + m.name + "' twice", m.loc);
        continue;
      }
      decl.members.emplace_back(m.name, m.type);
    }
    schema.records.emplace(r.name, std::move(decl));
  }
  std::map<std::string, SourceLoc> memberLocs;
  bool refsOk = true;
  for (const auto& r : ast.records) {
    for (const auto& m : r.members) refsOk = c.checkType(m.type, m.typeLoc) && refsOk;
  }
  if (!refsOk) return;
  std::map<std::string, int> color;
  std::set<std::string> reported;
  std::function<void(const RecordDeclAst&)> visit = [&](const RecordDeclAst& r) {
    color[r.name] = 1;
    for (const auto& m : r.members) {
      const TypeDesc* t = &m.type;
      while (t->kind == Kind::List) t = t->element.get();
      if (t->kind != Kind::Record) continue;
      const int state = color[t->recordName];
      if (state == 1) {
        if (reported.insert(r.name).second) {
          c.error("CyclicRecord", "record " + r.name + " contains itself through member '" + m.name + "'", m.loc);
        }
        continue;
      }
      if (state == 0) {
        auto it = std::find_if(ast.records.begin(), ast.records.end(),
                               [&](const RecordDeclAst& x) { return x.name == t->recordName; });
        if (it != ast.records.end()) visit(*it);
      }
    }
    color[r.name] = 2;
  };
  for (const auto& r : ast.records) {
    if (color[r.name] == 0) visit(r);
  }
}

bool hasRandom(const Expr& e) {
  if (e.kind == ExprKind::Random) return true;
  if (e.kind == ExprKind::Call && e.intrinsic && e.intrinsic->stochastic) return true;
  for (const auto& a : e.args) {
    if (a && hasRandom(*a)) return true;
  }
  for (const auto& a : e.rangeItems) {
    if (hasRandom(*a)) return true;
  }
  for (const auto& a : e.distArgs) {
    if (hasRandom(*a)) return true;
  }
  return false;
}

bool readsState(const Expr& e) {
  if (e.kind == ExprKind::Name && e.symbol != SymbolKind::Constant) return true;
  if (e.kind == ExprKind::Random) return true;
  if (e.kind == ExprKind::Call && (!e.intrinsic || e.intrinsic->stochastic)) return true;
  for (const auto& a : e.args) {
    if (a && readsState(*a)) return true;
  }
  return false;
}

void collectIntrinsics(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == ExprKind::Call && std::find(out.begin(), out.end(), e.text) == out.end()) out.push_back(e.text);
  for (const auto& a : e.args) {
    if (a) collectIntrinsics(*a, out);
  }
  for (const auto& a : e.rangeItems) collectIntrinsics(*a, out);
  for (const auto& a : e.distArgs) collectIntrinsics(*a, out);
}

void collectIntrinsics(const Block& block, std::vector<std::string>& out) {
  for (const auto& s : block) {
    if (s->target) collectIntrinsics(*s->target, out);
    if (s->value) collectIntrinsics(*s->value, out);
    collectIntrinsics(s->body, out);
    collectIntrinsics(s->elseBody, out);
  }
}

}  // namespace

bool usesRandomness(const Expr& e) { return hasRandom(e); }

bool usesRandomness(const Block& block) {
  for (const auto& s : block) {
    if (s->target && hasRandom(*s->target)) return true;
    if (s->value && hasRandom(*s->value)) return true;
    if (usesRandomness(s->body) || usesRandomness(s->elseBody)) return true;
  }
  return false;
}

std::vector<std::string> intrinsicsUsed(const Block& block) {
  std::vector<std::string> out;
  collectIntrinsics(block, out);
  return out;
}

std::optional<Value> foldConstant(const Expr& e, const StateSchema& schema) {
  if (readsState(e)) return std::nullopt;
  EvalEnv env;
  env.schema = &schema;
  try {
    return evaluate(e, env);
  } catch (const Error&) {
    return std::nullopt;
  }
}

TypecheckResult typecheck(std::shared_ptr<ModelAst> ast, std::shared_ptr<const IntrinsicRegistry> registry) {
  TypecheckResult result;
  auto schema = std::make_shared<StateSchema>();
  Checker c(*registry, *schema);

  buildRecords(*ast, *schema, c);
  std::set<std::string> names;
  auto claim = [&](const std::string& name, SourceLoc loc, const std::string& what) {
    if (name == "dt" || name == "time") {
      c.error("ReservedName", "'" + name + "' is reserved and cannot name a " + what, loc);
      return false;
    }
    if (!names.insert(name).second) {
      c.error("DuplicateName", "'" + name + "' is declared twice", loc);
      return false;
    }
    return true;
  };

  for (const auto& f : ast->fields) {
    if (!claim(f.name, f.loc, "field")) continue;
    if (!c.checkType(f.type, f.typeLoc)) continue;
    schema->fields.emplace_back(f.name, f.type);
  }
  schema->timeDomain = ast->timeDomain;
  if (schema->timeDomain) {
    try {
      TypeDesc::real(schema->timeDomain).validate();
    } catch (const Error& err) {
      c.error("InvalidType", err.what(), ast->stateLoc);
    }
  }

  for (auto& k : ast->consts) {
    if (!claim(k.name, k.loc, "constant")) continue;
    if (!c.checkType(k.type, k.typeLoc)) continue;
    auto t = c.check(*k.value, Context::Const);
    if (!t) continue;
    if (!c.assignableExpr(*k.value, k.type)) {
      c.error("TypeMismatch", "constant '" + k.name + "' is declared " + toString(k.type) + " but its value is " +
                                  toString(*t),
              k.value->loc);
      continue;
    }
    try {
      EvalEnv env;
      env.schema = schema.get();
      Value v = coerce(evaluate(*k.value, env), k.type, schema->records);
      if (!conforms(v, k.type, schema->records)) {
        c.error("ConstEvalError", "value of constant '" + k.name + "' lies outside its declared domain", k.value->loc);
        continue;
      }
      schema->constantTypes.emplace_back(k.name, k.type);
      schema->constantValues.push_back(std::move(v));
    } catch (const EvalError& err) {
      c.error("ConstEvalError", "constant '" + k.name + "': " + err.detail(), err.loc().valid() ? err.loc() : k.loc);
    } catch (const Error& err) {
      c.error("ConstEvalError", "constant '" + k.name + "': " + err.what(), k.value->loc);
    }
  }

  if (ast->timestep && !(*ast->timestep > 0.0)) {
    c.error("BadTimestep", "timestep must be positive, got " + [&] {
      std::ostringstream os;
      os << *ast->timestep;
      return os.str();
    }(), ast->timestepLoc);
  }

  if (ast->init) c.checkBlock(*ast->init, Context::Init);

  if (ast->laws.empty()) c.error("NoLaws", "model '" + ast->name + "' declares no laws", ast->loc);
  std::set<std::string> lawNames;
  for (auto& law : ast->laws) {
    if (!lawNames.insert(law.name).second) {
      c.error("DuplicateName", "law '" + law.name + "' is declared twice", law.loc);
    }
    c.checkPredicate(*law.guard, Context::Guard, "guard of law '" + law.name + "'");
    c.checkBlock(law.body, Context::Transition);
  }
  if (ast->halt) c.checkPredicate(*ast->halt, Context::Halt, "halt condition");
  if (ast->outcome) {
    auto t = c.check(*ast->outcome, Context::Outcome);
    if (t && t->kind != Kind::Int && t->kind != Kind::Real && t->kind != Kind::Bool) {
      c.error("TypeMismatch", "outcome must be int, real or bool, got " + toString(*t), ast->outcome->loc);
    }
  }

  result.diagnostics = std::move(c.diags);
  if (hasErrors(result.diagnostics)) return result;
  try {
    schema->validate();
  } catch (const Error& err) {
    result.diagnostics.push_back({Diagnostic::Severity::Error, "InvalidType", err.what(), ast->loc});
    return result;
  }
  result.model = TypedModel{std::move(ast), std::move(schema), std::move(registry)};
  return result;
}

std::vector<Diagnostic> typecheckObservable(Expr& e, const StateSchema& schema, const IntrinsicRegistry& registry) {
  StateSchema copy = schema;
  Checker c(registry, copy);
  auto t = c.check(e, Context::Observable);
  if (t && t->kind != Kind::Int && t->kind != Kind::Real && t->kind != Kind::Bool) {
    c.error("TypeMismatch", "observables must be int, real or bool, got " + toString(*t), e.loc);
  }
  return std::move(c.diags);
}

}  // namespace causal::cml
