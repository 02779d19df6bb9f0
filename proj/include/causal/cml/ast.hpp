#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "causal/core/types.hpp"
#include "causal/core/value.hpp"

namespace causal {

struct Intrinsic;

struct SourceLoc {
  int line = 0;
  int column = 0;
  bool valid() const { return line > 0 && column > 0; }
};

namespace cml {

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<Expr>;
using StmtPtr = std::shared_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

enum class ExprKind { Literal, Name, Member, Index, Unary, Binary, Call, ListLit, RecordLit, Random, Lambda };
enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class RangeKind { None, Interval, Set };

enum class SymbolKind { Unresolved, Field, Constant, Local, Dt, Time };

// How a Member node is applied at runtime.
enum class MemberMode { Record, OverList, PwAttribute };

struct Expr {
  ExprKind kind = ExprKind::Literal;
  SourceLoc loc;

  Value literal;     // Literal
  std::string text;  // literal token text; name of Name/Member/Call/RecordLit; lambda parameter
  UnaryOp unaryOp = UnaryOp::Neg;
  BinaryOp binaryOp = BinaryOp::Add;
  // Operands, call arguments, list items, record member values, lambda body
  // (args[0]), or Member/Index base (args[0]) and index (args[1]).
  std::vector<ExprPtr> args;
  std::vector<std::string> memberNames;  // RecordLit

  // Random
  RangeKind rangeKind = RangeKind::None;
  std::vector<ExprPtr> rangeItems;
  std::string distName;
  SourceLoc distLoc;
  std::vector<ExprPtr> distArgs;

  // Annotations written by the typechecker.
  std::optional<TypeDesc> type;
  SymbolKind symbol = SymbolKind::Unresolved;
  std::size_t symbolIndex = 0;  // field/constant index or local slot
  std::size_t memberIndex = 0;
  MemberMode memberMode = MemberMode::Record;
  const Intrinsic* intrinsic = nullptr;
};

enum class StmtKind { Assign, For, If };

struct Stmt {
  StmtKind kind = StmtKind::Assign;
  SourceLoc loc;
  ExprPtr target;  // Assign
  ExprPtr value;   // Assign; For iterable; If condition
  std::string var;  // For
  SourceLoc varLoc;
  Block body;       // For body; If then-branch
  Block elseBody;   // If
  bool hasElse = false;

  // Annotations.
  std::size_t slot = 0;            // For: local slot of the loop variable
  bool varWritable = false;        // For: iterable is a field path
};

struct FieldDecl {
  std::string name;
  SourceLoc loc;
  TypeDesc type;
  SourceLoc typeLoc;
};

struct ConstDecl {
  std::string name;
  SourceLoc loc;
  TypeDesc type;
  SourceLoc typeLoc;
  ExprPtr value;
};

struct RecordDeclAst {
  std::string name;
  SourceLoc loc;
  std::vector<FieldDecl> members;
};

struct LawDecl {
  std::string name;
  SourceLoc loc;
  ExprPtr guard;
  Block body;
};

struct ModelAst {
  std::string name;
  SourceLoc loc;
  std::vector<ConstDecl> consts;
  std::vector<RecordDeclAst> records;
  std::vector<FieldDecl> fields;
  bool hasState = false;
  SourceLoc stateLoc;
  std::optional<Domain> timeDomain;
  std::optional<Block> init;
  ExprPtr halt;
  ExprPtr outcome;
  std::optional<double> timestep;
  SourceLoc timestepLoc;
  std::vector<LawDecl> laws;
};

}  // namespace cml
}  // namespace causal
