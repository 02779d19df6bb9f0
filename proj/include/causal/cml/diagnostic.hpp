#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "causal/cml/ast.hpp"

namespace causal::cml {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceLoc loc;
};

// `file:line:col: error[Code]: message`
std::string format(const Diagnostic& d, std::string_view file);

bool hasErrors(const std::vector<Diagnostic>& diags);

}  // namespace causal::cml
