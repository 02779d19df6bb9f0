#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "causal/cml/diagnostic.hpp"

namespace causal::cml {

enum class TokenKind { Identifier, Integer, Real, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLoc loc;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an End token on success
  std::vector<Diagnostic> diagnostics;
};

// Columns count code points, so identifiers such as `ψ` advance by one.
LexResult tokenize(std::string_view source);

}  // namespace causal::cml
