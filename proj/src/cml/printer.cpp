#include "causal/cml/printer.hpp"

#include <cstdio>
#include <sstream>

namespace causal::cml {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  return s;
}

// A number token that parses back to a real: keep a '.' or exponent.
std::string realToken(double x) {
  std::string s = num(x);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string domainText(const Domain& d, TypeDesc::Kind kind) {
  std::string out = " in ";
  if (d.kind == Domain::Kind::Interval) return out + "[" + num(d.lo) + ", " + num(d.hi) + "]";
  out += "{";
  for (std::size_t i = 0; i < d.members.size(); ++i) {
    if (i) out += ", ";
    if (kind == TypeDesc::Kind::Bool) {
      out += d.members[i] != 0.0 ? "true" : "false";
    } else {
      out += num(d.members[i]);
    }
  }
  return out + "}";
}

std::string typeText(const TypeDesc& t) {
  std::string out;
  switch (t.kind) {
    case TypeDesc::Kind::Real: out = "real"; break;
    case TypeDesc::Kind::Int: out = "int"; break;
    case TypeDesc::Kind::Bool: out = "bool"; break;
    case TypeDesc::Kind::Complex: out = "complex"; break;
    case TypeDesc::Kind::Vector: out = "vector(" + std::to_string(t.length) + ")"; break;
    case TypeDesc::Kind::List:
      out = "list(" + typeText(*t.element);
      if (t.maxLength > 0) out += ", " + std::to_string(t.maxLength);
      out += ")";
      break;
    case TypeDesc::Kind::Record: out = t.recordName; break;
    case TypeDesc::Kind::CGrid: out = "cgrid(" + std::to_string(t.length) + ", " + realToken(t.dx) + ")"; break;
    case TypeDesc::Kind::Pw:
      out = "pw(";
      for (std::size_t i = 0; i < t.pwAttrs.size(); ++i) {
        if (i) out += ", ";
        out += t.pwAttrs[i].name + ": " + typeText(t.pwAttrs[i].type);
      }
      out += ")";
      break;
  }
  if (t.domain) out += domainText(*t.domain, t.kind);
  return out;
}

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 7;
  if (e.kind != ExprKind::Binary) return 9;
  switch (e.binaryOp) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 6;
    case BinaryOp::Pow: return 8;
  }
  return 9;
}

const char* opText(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string expr(const Expr& e);

std::string atLeast(const Expr& e, int prec) {
  std::string s = expr(e);
  return precedence(e) < prec ? "(" + s + ")" : s;
}

std::string joined(const std::vector<ExprPtr>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += expr(*xs[i]);
  }
  return out;
}

std::string literalText(const Expr& e) {
  if (!e.text.empty()) return e.text;
  if (e.literal.isReal()) return realToken(e.literal.asReal());
  return render(e.literal);
}

std::string expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal: return literalText(e);
    case ExprKind::Name: return e.text;
    case ExprKind::Member: return atLeast(*e.args[0], 9) + "." + e.text;
    case ExprKind::Index: return atLeast(*e.args[0], 9) + "[" + expr(*e.args[1]) + "]";
    case ExprKind::Unary:
      return std::string(e.unaryOp == UnaryOp::Neg ? "-" : "!") + atLeast(*e.args[0], 7);
    case ExprKind::Binary: {
      const int p = precedence(e);
      if (e.binaryOp == BinaryOp::Pow) return atLeast(*e.args[0], 9) + " ^ " + atLeast(*e.args[1], 7);
      return atLeast(*e.args[0], p) + " " + opText(e.binaryOp) + " " + atLeast(*e.args[1], p + 1);
    }
    case ExprKind::Call: return e.text + "(" + joined(e.args) + ")";
    case ExprKind::ListLit: return "[" + joined(e.args) + "]";
    case ExprKind::RecordLit: {
      std::string out = e.text + " { ";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += e.memberNames[i] + ": " + expr(*e.args[i]);
      }
      return out + " }";
    }
    case ExprKind::Random: {
      std::string out = "random(";
      if (e.rangeKind == RangeKind::Interval) out += "[" + joined(e.rangeItems) + "], ";
      if (e.rangeKind == RangeKind::Set) out += "{" + joined(e.rangeItems) + "}, ";
      out += e.distName;
      if (!e.distArgs.empty()) out += "(" + joined(e.distArgs) + ")";
      return out + ")";
    }
    case ExprKind::Lambda: return e.text + " -> " + expr(*e.args[0]);
  }
  return "?";
}

void block(std::ostringstream& os, const Block& b, int indent);

void statement(std::ostringstream& os, const Stmt& s, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (s.kind) {
    case StmtKind::Assign: os << pad << expr(*s.target) << " = " << expr(*s.value) << ";\n"; break;
    case StmtKind::For:
      os << pad << "for " << s.var << " in " << expr(*s.value) << " ";
      block(os, s.body, indent);
      os << "\n";
      break;
    case StmtKind::If:
      os << pad << "if " << expr(*s.value) << " ";
      block(os, s.body, indent);
      if (s.hasElse) {
        os << " else ";
        block(os, s.elseBody, indent);
      }
      os << "\n";
      break;
  }
}

void block(std::ostringstream& os, const Block& b, int indent) {
  os << "{\n";
  for (const auto& s : b) statement(os, *s, indent + 2);
  os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
}

// ---- tree dump ---------------------------------------------------------------

std::string dump(const Expr& e);

std::string dumpAll(const std::vector<ExprPtr>& xs) {
  std::string out;
  for (const auto& x : xs) out += " " + dump(*x);
  return out;
}

std::string dump(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal: return "(lit " + kindName(e.literal.kind()) + " " + render(e.literal) + ")";
    case ExprKind::Name: return "(name " + e.text + ")";
    case ExprKind::Member: return "(member " + e.text + " " + dump(*e.args[0]) + ")";
    case ExprKind::Index: return "(index" + dumpAll(e.args) + ")";
    case ExprKind::Unary: return std::string("(") + (e.unaryOp == UnaryOp::Neg ? "neg" : "not") + dumpAll(e.args) + ")";
    case ExprKind::Binary: return std::string("(") + opText(e.binaryOp) + dumpAll(e.args) + ")";
    case ExprKind::Call: return "(call " + e.text + dumpAll(e.args) + ")";
    case ExprKind::ListLit: return "(list" + dumpAll(e.args) + ")";
    case ExprKind::RecordLit: {
      std::string out = "(record " + e.text;
      for (std::size_t i = 0; i < e.args.size(); ++i) out += " (" + e.memberNames[i] + " " + dump(*e.args[i]) + ")";
      return out + ")";
    }
    case ExprKind::Random: {
      const char* range = e.rangeKind == RangeKind::Interval ? "interval" : e.rangeKind == RangeKind::Set ? "set" : "none";
      return std::string("(random (") + range + dumpAll(e.rangeItems) + ") (" + e.distName + dumpAll(e.distArgs) + "))";
    }
    case ExprKind::Lambda: return "(lambda " + e.text + " " + dump(*e.args[0]) + ")";
  }
  return "?";
}

std::string dumpBlock(const Block& b);

std::string dumpStmt(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Assign: return "(assign " + dump(*s.target) + " " + dump(*s.value) + ")";
    case StmtKind::For: return "(for " + s.var + " " + dump(*s.value) + " " + dumpBlock(s.body) + ")";
    case StmtKind::If:
      return "(if " + dump(*s.value) + " " + dumpBlock(s.body) + (s.hasElse ? " " + dumpBlock(s.elseBody) : "") + ")";
  }
  return "?";
}

std::string dumpBlock(const Block& b) {
  std::string out = "(block";
  for (const auto& s : b) out += " " + dumpStmt(*s);
  return out + ")";
}

}  // namespace

std::string prettyPrint(const Expr& e) { return expr(e); }

std::string prettyPrint(const ModelAst& ast) {
  std::ostringstream os;
  os << "model " << ast.name << " {\n";
  for (const auto& c : ast.consts) {
    os << "  const " << c.name << ": " << typeText(c.type) << " = " << expr(*c.value) << ";\n";
  }
  for (const auto& r : ast.records) {
    os << "  record " << r.name << " {\n";
    for (const auto& m : r.members) os << "    " << m.name << ": " << typeText(m.type) << ";\n";
    os << "  }\n";
  }
  if (ast.hasState) {
    os << "  state {\n";
    for (const auto& f : ast.fields) os << "    " << f.name << ": " << typeText(f.type) << ";\n";
    if (ast.timeDomain) os << "    time" << domainText(*ast.timeDomain, TypeDesc::Kind::Real) << ";\n";
    os << "  }\n";
  }
  if (ast.timestep) os << "  timestep " << realToken(*ast.timestep) << ";\n";
  if (ast.init) {
    os << "  init ";
    block(os, *ast.init, 2);
    os << "\n";
  }
  if (ast.halt) os << "  halt when " << expr(*ast.halt) << ";\n";
  if (ast.outcome) os << "  outcome " << expr(*ast.outcome) << ";\n";
  for (const auto& law : ast.laws) {
    os << "  law " << law.name << " {\n";
    os << "    when " << expr(*law.guard) << ";\n";
    os << "    then ";
    block(os, law.body, 4);
    os << "\n  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string dumpTree(const ModelAst& ast) {
  std::ostringstream os;
  os << "(model " << ast.name;
  for (const auto& c : ast.consts) os << " (const " << c.name << " " << typeText(c.type) << " " << dump(*c.value) << ")";
  for (const auto& r : ast.records) {
    os << " (record " << r.name;
    for (const auto& m : r.members) os << " (" << m.name << " " << typeText(m.type) << ")";
    os << ")";
  }
  os << " (state";
  for (const auto& f : ast.fields) os << " (" << f.name << " " << typeText(f.type) << ")";
  if (ast.timeDomain) os << " (time" << domainText(*ast.timeDomain, TypeDesc::Kind::Real) << ")";
  os << ")";
  if (ast.timestep) os << " (timestep " << num(*ast.timestep) << ")";
  if (ast.init) os << " (init " << dumpBlock(*ast.init) << ")";
  if (ast.halt) os << " (halt " << dump(*ast.halt) << ")";
  if (ast.outcome) os << " (outcome " << dump(*ast.outcome) << ")";
  for (const auto& law : ast.laws) os << " (law " << law.name << " " << dump(*law.guard) << " " << dumpBlock(law.body) << ")";
  os << ")";
  return os.str();
}

}  // namespace causal::cml
