#include "causal/cml/diagnostic.hpp"

#include <algorithm>

namespace causal::cml {

std::string format(const Diagnostic& d, std::string_view file) {
  std::string out(file);
  out += ":" + std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": ";
  out += d.severity == Diagnostic::Severity::Error ? "error" : "warning";
  out += "[" + d.code + "]: " + d.message;
  return out;
}

bool hasErrors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

}  // namespace causal::cml
