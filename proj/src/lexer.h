#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "conan/source_model.h"

namespace conan::detail {

enum class TokenKind { Identifier, Number, String, Char, Operator };

struct Token {
  TokenKind kind = TokenKind::Operator;
  std::string_view text;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
  // First token on its line.
  bool starts_line = false;

  bool is(std::string_view s) const {
    return text == s;
  }
  bool is_identifier() const {
    return kind == TokenKind::Identifier;
  }
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<std::string> diagnostics;
  bool binary = false;
};

// Tokenizes Java or Kotlin. Comments are dropped. String literals, including
// Kotlin templates and text blocks, become single tokens. The returned
// tokens view into `text`, which must outlive them.
LexResult lex(std::string_view text, Language language);

} // namespace conan::detail
