#include "causal/cml/parser.hpp"

#include <cerrno>
#include <cstdlib>
#include <set>

#include "causal/cml/lexer.hpp"

namespace causal::cml {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "model", "const", "record", "state", "init",  "halt",     "when",    "then",  "law",
    "for",   "in",    "if",     "else",  "true",  "false",    "timestep", "outcome", "random"};

struct ParseFailure {};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Diagnostic failure;

  std::shared_ptr<ModelAst> model() {
    auto ast = std::make_shared<ModelAst>();
    ast->loc = peek().loc;
    expectKeyword("model", "a model must start with 'model'");
    ast->name = expectIdentifier("model name");
    expectPunct("{", "after model name");
    while (!atPunct("}")) {
      if (atEnd()) fail(peek(), "unterminated model body; expected '}'");
      item(*ast);
    }
    expectPunct("}", "to close the model");
    if (!atEnd()) fail(peek(), "unexpected '" + peek().text + "' after the end of the model");
    return ast;
  }

  ExprPtr standaloneExpression() {
    auto e = expression();
    if (!atEnd()) fail(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const {
    const std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool atEnd() const { return peek().kind == TokenKind::End; }
  bool atPunct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Punct && peek(k).text == p;
  }
  bool atKeyword(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Identifier && peek(k).text == kw;
  }
  bool atIdentifier(std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Identifier && !kKeywords.count(peek(k).text);
  }

  static std::string describe(const Token& t) {
    if (t.kind == TokenKind::End) return "end of input";
    return "'" + t.text + "'";
  }

  [[noreturn]] void fail(const Token& at, std::string message, std::string code = "SyntaxError") {
    failure = {Diagnostic::Severity::Error, std::move(code), std::move(message), at.loc};
    throw ParseFailure{};
  }

  void expectPunct(std::string_view p, std::string_view context) {
    if (!atPunct(p)) fail(peek(), "expected '" + std::string(p) + "' " + std::string(context) + ", found " + describe(peek()));
    next();
  }

  void expectKeyword(std::string_view kw, std::string_view message) {
    if (!atKeyword(kw)) fail(peek(), std::string(message) + ", found " + describe(peek()));
    next();
  }

  std::string expectIdentifier(std::string_view what) {
    if (!atIdentifier()) {
      if (peek().kind == TokenKind::Identifier) {
        fail(peek(), "'" + peek().text + "' is a reserved word and cannot be used as " + std::string(what));
      }
      fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    }
    return next().text;
  }

  // ---- items ---------------------------------------------------------------

  void item(ModelAst& ast) {
    const Token& t = peek();
    if (atKeyword("const")) return constDecl(ast);
    if (atKeyword("record")) return recordDecl(ast);
    if (atKeyword("state")) return stateDecl(ast);
    if (atKeyword("init")) {
      if (ast.init) fail(t, "duplicate init block", "DuplicateItem");
      next();
      ast.init = block();
      return;
    }
    if (atKeyword("halt")) {
      if (ast.halt) fail(t, "duplicate halt declaration", "DuplicateItem");
      next();
      expectKeyword("when", "expected 'when' after 'halt'");
      ast.halt = expression();
      expectPunct(";", "after halt condition");
      return;
    }
    if (atKeyword("outcome")) {
      if (ast.outcome) fail(t, "duplicate outcome declaration", "DuplicateItem");
      next();
      ast.outcome = expression();
      expectPunct(";", "after outcome expression");
      return;
    }
    if (atKeyword("timestep")) {
      if (ast.timestep) fail(t, "duplicate timestep declaration", "DuplicateItem");
      next();
      ast.timestepLoc = peek().loc;
      ast.timestep = signedNumber();
      expectPunct(";", "after timestep");
      return;
    }
    if (atKeyword("law")) return lawDecl(ast);
    fail(t, "expected a model item (const, record, state, init, halt, outcome, timestep, law), found " + describe(t));
  }

  void constDecl(ModelAst& ast) {
    next();
    ConstDecl d;
    d.loc = peek().loc;
    d.name = expectIdentifier("constant name");
    expectPunct(":", "after constant name");
    d.typeLoc = peek().loc;
    d.type = type();
    expectPunct("=", "in constant declaration");
    d.value = expression();
    expectPunct(";", "after constant declaration");
    ast.consts.push_back(std::move(d));
  }

  void recordDecl(ModelAst& ast) {
    next();
    RecordDeclAst r;
    r.loc = peek().loc;
    r.name = expectIdentifier("record name");
    expectPunct("{", "after record name");
    while (!atPunct("}")) {
      if (atEnd()) fail(peek(), "unterminated record; expected '}'");
      r.members.push_back(fieldDecl("member name"));
    }
    next();
    ast.records.push_back(std::move(r));
  }

  FieldDecl fieldDecl(std::string_view what) {
    FieldDecl f;
    f.loc = peek().loc;
    f.name = expectIdentifier(what);
    expectPunct(":", "after '" + f.name + "'");
    f.typeLoc = peek().loc;
    f.type = type();
    expectPunct(";", "after declaration of '" + f.name + "'");
    return f;
  }

  void stateDecl(ModelAst& ast) {
    if (ast.hasState) fail(peek(), "duplicate state block", "DuplicateItem");
    ast.stateLoc = peek().loc;
    next();
    ast.hasState = true;
    expectPunct("{", "after 'state'");
    while (!atPunct("}")) {
      if (atEnd()) fail(peek(), "unterminated state block; expected '}'");
      if (atKeyword("time")) {
        // `time` is reserved for the time coordinate; `time in [a, b];`
        // declares its sampling domain.
        const Token& t = next();
        if (!atKeyword("in")) fail(t, "'time' is reserved; use 'time in [lo, hi];' to give its domain");
        next();
        if (ast.timeDomain) fail(t, "duplicate time domain", "DuplicateItem");
        ast.timeDomain = domain();
        expectPunct(";", "after time domain");
        continue;
      }
      ast.fields.push_back(fieldDecl("field name"));
    }
    next();
  }

  void lawDecl(ModelAst& ast) {
    next();
    LawDecl law;
    law.loc = peek().loc;
    law.name = expectIdentifier("law name");
    expectPunct("{", "after law name");
    expectKeyword("when", "expected 'when' to start the law's guard");
    law.guard = expression();
    expectPunct(";", "after guard");
    expectKeyword("then", "expected 'then' after the guard");
    law.body = block();
    expectPunct("}", "to close the law");
    ast.laws.push_back(std::move(law));
  }

  // ---- types ---------------------------------------------------------------

  std::size_t positiveInt(std::string_view what) {
    if (peek().kind != TokenKind::Integer) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    const Token& t = next();
    errno = 0;
    const unsigned long long v = std::strtoull(t.text.c_str(), nullptr, 10);
    if (errno == ERANGE) fail(t, "integer literal out of range");
    return static_cast<std::size_t>(v);
  }

  double signedNumber() {
    bool negative = false;
    if (atPunct("-") || atPunct("+")) negative = next().text == "-";
    if (peek().kind != TokenKind::Integer && peek().kind != TokenKind::Real) {
      fail(peek(), "expected a number, found " + describe(peek()));
    }
    const double v = std::strtod(next().text.c_str(), nullptr);
    return negative ? -v : v;
  }

  Domain domain() {
    if (atPunct("[")) {
      next();
      const double lo = signedNumber();
      expectPunct(",", "between interval bounds");
      const double hi = signedNumber();
      expectPunct("]", "to close the interval");
      return Domain::interval(lo, hi);
    }
    if (atPunct("{")) {
      next();
      std::vector<double> members;
      do {
        if (atKeyword("true") || atKeyword("false")) {
          members.push_back(next().text == "true" ? 1.0 : 0.0);
        } else {
          members.push_back(signedNumber());
        }
      } while (atPunct(",") && (next(), true));
      expectPunct("}", "to close the value set");
      return Domain::set(std::move(members));
    }
    fail(peek(), "expected a domain '[lo, hi]' or '{v1, v2, ...}', found " + describe(peek()));
  }

  TypeDesc type() {
    if (peek().kind != TokenKind::Identifier) fail(peek(), "expected a type, found " + describe(peek()));
    const Token& t = peek();
    TypeDesc result;
    if (t.text == "real" || t.text == "int" || t.text == "bool" || t.text == "complex") {
      next();
      if (t.text == "real") result = TypeDesc::real();
      if (t.text == "int") result = TypeDesc::integer();
      if (t.text == "bool") result = TypeDesc::boolean();
      if (t.text == "complex") result = TypeDesc::complex();
    } else if (t.text == "vector") {
      next();
      expectPunct("(", "after 'vector'");
      const auto n = positiveInt("vector length");
      expectPunct(")", "after vector length");
      result = TypeDesc::vector(n);
    } else if (t.text == "list") {
      next();
      expectPunct("(", "after 'list'");
      TypeDesc element = type();
      std::size_t bound = 0;
      if (atPunct(",")) {
        next();
        bound = positiveInt("list length bound");
      }
      expectPunct(")", "to close list type");
      result = TypeDesc::list(std::move(element), bound);
    } else if (t.text == "cgrid") {
      next();
      expectPunct("(", "after 'cgrid'");
      const auto n = positiveInt("grid length");
      expectPunct(",", "after grid length");
      const double dx = signedNumber();
      expectPunct(")", "to close cgrid type");
      result = TypeDesc::cgrid(n, dx);
    } else if (t.text == "pw") {
      next();
      expectPunct("(", "after 'pw'");
      std::vector<PwAttribute> attrs;
      do {
        PwAttribute a;
        a.name = expectIdentifier("pw attribute name");
        expectPunct(":", "after pw attribute name");
        a.type = type();
        attrs.push_back(std::move(a));
      } while (atPunct(",") && (next(), true));
      expectPunct(")", "to close pw type");
      result = TypeDesc::pw(std::move(attrs));
    } else if (atIdentifier()) {
      result = TypeDesc::record(next().text);
    } else {
      fail(t, "expected a type, found " + describe(t));
    }
    if (atKeyword("in")) {
      next();
      result.domain = domain();
    }
    return result;
  }

  // ---- statements ------------------------------------------------------------

  Block block() {
    expectPunct("{", "to open a block");
    Block out;
    while (!atPunct("}")) {
      if (atEnd()) fail(peek(), "unterminated block; expected '}'");
      out.push_back(statement());
    }
    next();
    return out;
  }

  StmtPtr statement() {
    auto s = std::make_shared<Stmt>();
    s->loc = peek().loc;
    if (atKeyword("for")) {
      next();
      s->kind = StmtKind::For;
      s->varLoc = peek().loc;
      s->var = expectIdentifier("loop variable");
      expectKeyword("in", "expected 'in' after loop variable");
      s->value = expression();
      s->body = block();
      return s;
    }
    if (atKeyword("if")) {
      next();
      s->kind = StmtKind::If;
      s->value = expression();
      s->body = block();
      if (atKeyword("else")) {
        next();
        s->hasElse = true;
        if (atKeyword("if")) {
          s->elseBody.push_back(statement());
        } else {
          s->elseBody = block();
        }
      }
      return s;
    }
    s->kind = StmtKind::Assign;
    if (!atIdentifier()) fail(peek(), "expected a statement, found " + describe(peek()));
    s->target = postfix();
    expectPunct("=", "in assignment");
    s->value = expression();
    expectPunct(";", "after assignment");
    return s;
  }

  // ---- expressions -----------------------------------------------------------

  static ExprPtr node(ExprKind k, SourceLoc loc) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->loc = loc;
    return e;
  }

  ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
    auto e = node(ExprKind::Binary, loc);
    e->binaryOp = op;
    e->args = {std::move(lhs), std::move(rhs)};
    return e;
  }

  ExprPtr expression() { return orExpr(); }

  ExprPtr orExpr() {
    auto lhs = andExpr();
    while (atPunct("||")) {
      const auto loc = next().loc;
      lhs = binary(BinaryOp::Or, lhs, andExpr(), loc);
    }
    return lhs;
  }

  ExprPtr andExpr() {
    auto lhs = equality();
    while (atPunct("&&")) {
      const auto loc = next().loc;
      lhs = binary(BinaryOp::And, lhs, equality(), loc);
    }
    return lhs;
  }

  ExprPtr equality() {
    auto lhs = comparison();
    while (atPunct("==") || atPunct("!=")) {
      const Token& t = next();
      lhs = binary(t.text == "==" ? BinaryOp::Eq : BinaryOp::Ne, lhs, comparison(), t.loc);
    }
    return lhs;
  }

  ExprPtr comparison() {
    auto lhs = additive();
    while (atPunct("<") || atPunct("<=") || atPunct(">") || atPunct(">=")) {
      const Token& t = next();
      BinaryOp op = BinaryOp::Lt;
      if (t.text == "<=") op = BinaryOp::Le;
      if (t.text == ">") op = BinaryOp::Gt;
      if (t.text == ">=") op = BinaryOp::Ge;
      lhs = binary(op, lhs, additive(), t.loc);
    }
    return lhs;
  }

  ExprPtr additive() {
    auto lhs = multiplicative();
    while (atPunct("+") || atPunct("-")) {
      const Token& t = next();
      lhs = binary(t.text == "+" ? BinaryOp::Add : BinaryOp::Sub, lhs, multiplicative(), t.loc);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    auto lhs = unary();
    while (atPunct("*") || atPunct("/")) {
      const Token& t = next();
      lhs = binary(t.text == "*" ? BinaryOp::Mul : BinaryOp::Div, lhs, unary(), t.loc);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (atPunct("-") || atPunct("!")) {
      const Token& t = next();
      auto e = node(ExprKind::Unary, t.loc);
      e->unaryOp = t.text == "-" ? UnaryOp::Neg : UnaryOp::Not;
      e->args = {unary()};
      return e;
    }
    return power();
  }

  ExprPtr power() {
    auto base = postfix();
    if (atPunct("^")) {
      const auto loc = next().loc;
      return binary(BinaryOp::Pow, base, unary(), loc);
    }
    return base;
  }

  ExprPtr postfix() {
    auto e = primary();
    while (true) {
      if (atPunct(".")) {
        const auto loc = next().loc;
        auto m = node(ExprKind::Member, loc);
        m->text = expectIdentifier("member name");
        m->args = {e};
        e = m;
      } else if (atPunct("[")) {
        const auto loc = next().loc;
        auto ix = node(ExprKind::Index, loc);
        ix->args = {e, expression()};
        expectPunct("]", "to close index");
        e = ix;
      } else {
        return e;
      }
    }
  }

  std::vector<ExprPtr> callArguments() {
    std::vector<ExprPtr> args;
    expectPunct("(", "to open argument list");
    if (!atPunct(")")) {
      do {
        if (atIdentifier() && atPunct("->", 1)) {
          auto lam = node(ExprKind::Lambda, peek().loc);
          lam->text = next().text;
          next();
          lam->args = {expression()};
          args.push_back(lam);
        } else {
          args.push_back(expression());
        }
      } while (atPunct(",") && (next(), true));
    }
    expectPunct(")", "to close argument list");
    return args;
  }

  ExprPtr randomCall(SourceLoc loc) {
    auto e = node(ExprKind::Random, loc);
    expectPunct("(", "after 'random'");
    if (atPunct("[")) {
      next();
      e->rangeKind = RangeKind::Interval;
      e->rangeItems.push_back(expression());
      expectPunct(",", "between interval bounds");
      e->rangeItems.push_back(expression());
      expectPunct("]", "to close the interval");
      expectPunct(",", "after the value range");
    } else if (atPunct("{")) {
      next();
      e->rangeKind = RangeKind::Set;
      do {
        e->rangeItems.push_back(expression());
      } while (atPunct(",") && (next(), true));
      expectPunct("}", "to close the value set");
      expectPunct(",", "after the value range");
    }
    if (peek().kind != TokenKind::Identifier) fail(peek(), "expected a distribution name, found " + describe(peek()));
    e->distLoc = peek().loc;
    e->distName = next().text;
    if (atPunct("(")) e->distArgs = callArguments();
    while (atPunct(",")) {
      next();
      e->distArgs.push_back(expression());
    }
    expectPunct(")", "to close 'random'");
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Integer) {
      next();
      auto e = node(ExprKind::Literal, t.loc);
      errno = 0;
      const long long v = std::strtoll(t.text.c_str(), nullptr, 10);
      if (errno == ERANGE) fail(t, "integer literal out of range");
      e->literal = Value::integer(v);
      e->text = t.text;
      return e;
    }
    if (t.kind == TokenKind::Real) {
      next();
      auto e = node(ExprKind::Literal, t.loc);
      e->literal = Value::real(std::strtod(t.text.c_str(), nullptr));
      e->text = t.text;
      return e;
    }
    if (atKeyword("true") || atKeyword("false")) {
      next();
      auto e = node(ExprKind::Literal, t.loc);
      e->literal = Value::boolean(t.text == "true");
      e->text = t.text;
      return e;
    }
    if (atKeyword("random")) {
      next();
      return randomCall(t.loc);
    }
    if (atPunct("(")) {
      next();
      auto e = expression();
      expectPunct(")", "to close parenthesis");
      return e;
    }
    if (atPunct("[")) {
      next();
      auto e = node(ExprKind::ListLit, t.loc);
      if (!atPunct("]")) {
        do {
          e->args.push_back(expression());
        } while (atPunct(",") && (next(), true));
      }
      expectPunct("]", "to close list literal");
      return e;
    }
    if (atIdentifier()) {
      // Record literal: `Name { member: expr, ... }`.
      if (atPunct("{", 1) && peek(2).kind == TokenKind::Identifier && atPunct(":", 3)) {
        auto e = node(ExprKind::RecordLit, t.loc);
        e->text = next().text;
        next();
        do {
          e->memberNames.push_back(expectIdentifier("record member"));
          expectPunct(":", "after record member");
          e->args.push_back(expression());
        } while (atPunct(",") && (next(), true));
        expectPunct("}", "to close record literal");
        return e;
      }
      if (atPunct("(", 1)) {
        auto e = node(ExprKind::Call, t.loc);
        e->text = next().text;
        e->args = callArguments();
        return e;
      }
      auto e = node(ExprKind::Name, t.loc);
      e->text = next().text;
      return e;
    }
    if (t.kind == TokenKind::Identifier) {
      fail(t, "unexpected keyword '" + t.text + "' in expression");
    }
    fail(t, "expected an expression, found " + describe(t));
  }
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  auto lexed = tokenize(source);
  if (hasErrors(lexed.diagnostics)) {
    result.diagnostics = std::move(lexed.diagnostics);
    return result;
  }
  Parser p(std::move(lexed.tokens));
  try {
    result.ast = p.model();
  } catch (const ParseFailure&) {
    result.diagnostics.push_back(p.failure);
  }
  return result;
}

ExprParseResult parseExpression(std::string_view source) {
  ExprParseResult result;
  auto lexed = tokenize(source);
  if (hasErrors(lexed.diagnostics)) {
    result.diagnostics = std::move(lexed.diagnostics);
    return result;
  }
  Parser p(std::move(lexed.tokens));
  try {
    result.expr = p.standaloneExpression();
  } catch (const ParseFailure&) {
    result.diagnostics.push_back(p.failure);
  }
  return result;
}

}  // namespace causal::cml
