#include "causal/cml/lexer.hpp"

#include <cctype>

namespace causal::cml {

namespace {

bool identStart(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool identChar(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

constexpr std::string_view kTwoCharPuncts[] = {"==", "!=", "<=", ">=", "&&", "||", "->"};
constexpr std::string_view kOneCharPuncts = "{}()[];:,.=<>+-*/^!";

}  // namespace

LexResult tokenize(std::string_view src) {
  LexResult out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&]() {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    ++i;
    if (c == '\n') {
      ++line;
      col = 1;
    } else if ((c & 0xC0) != 0x80) {
      // Continuation bytes of a UTF-8 sequence do not start a new column.
      ++col;
    }
  };

  while (i < src.size()) {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    Token tok;
    tok.loc = {line, col};
    const std::size_t start = i;
    if (identStart(c)) {
      while (i < src.size() && identChar(static_cast<unsigned char>(src[i]))) {
        advance();
      }
      tok.kind = TokenKind::Identifier;
      tok.text = std::string(src.substr(start, i - start));
      out.tokens.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(c)) {
      bool real = false;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
      if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        real = true;
        advance();
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          real = true;
          while (i < j) advance();
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
        }
      }
      if (i < src.size() && identStart(static_cast<unsigned char>(src[i]))) {
        out.diagnostics.push_back({Diagnostic::Severity::Error, "LexError",
                                   "malformed number literal", SourceLoc{line, col}});
        return out;
      }
      tok.kind = real ? TokenKind::Real : TokenKind::Integer;
      tok.text = std::string(src.substr(start, i - start));
      out.tokens.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    for (auto p : kTwoCharPuncts) {
      if (src.substr(i, 2) == p) {
        advance();
        advance();
        tok.kind = TokenKind::Punct;
        tok.text = std::string(p);
        out.tokens.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kOneCharPuncts.find(static_cast<char>(c)) != std::string_view::npos) {
      advance();
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, static_cast<char>(c));
      out.tokens.push_back(std::move(tok));
      continue;
    }
    std::string shown = c >= 0x20 && c < 0x7F ? std::string(1, static_cast<char>(c)) : "\\x" + std::to_string(c);
    out.diagnostics.push_back(
        {Diagnostic::Severity::Error, "LexError", "unexpected character '" + shown + "'", SourceLoc{line, col}});
    return out;
  }
  Token end;
  end.kind = TokenKind::End;
  end.loc = {line, col};
  out.tokens.push_back(std::move(end));
  return out;
}

}  // namespace causal::cml
