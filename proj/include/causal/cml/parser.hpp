#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "causal/cml/ast.hpp"
#include "causal/cml/diagnostic.hpp"

namespace causal::cml {

struct ParseResult {
  std::shared_ptr<ModelAst> ast;  // null when diagnostics contain an error
  std::vector<Diagnostic> diagnostics;
};

// Parses a whole `.cml` model. Stops at the first syntax error and reports
// it at the offending token.
ParseResult parse(std::string_view source);

struct ExprParseResult {
  ExprPtr expr;
  std::vector<Diagnostic> diagnostics;
};

// Parses a standalone expression (observables, parameter overrides).
ExprParseResult parseExpression(std::string_view source);

}  // namespace causal::cml
