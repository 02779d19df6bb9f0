#pragma once

#include <string>

#include "causal/cml/ast.hpp"

namespace causal::cml {

// Renders an AST as CML source that parses back to the same tree.
std::string prettyPrint(const ModelAst& ast);
std::string prettyPrint(const Expr& e);

// Location-free S-expression of the tree; equal dumps mean structurally
// identical ASTs.
std::string dumpTree(const ModelAst& ast);

}  // namespace causal::cml
