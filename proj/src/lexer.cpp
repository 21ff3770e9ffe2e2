#include "lexer.h"

#include <array>
#include <cctype>

namespace conan::detail {

namespace {

constexpr std::array<std::string_view, 22> kJavaOperators = {
    "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", "@",  "."};

constexpr std::array<std::string_view, 25> kKotlinOperators = {
    "===", "!==", "?.", "?:", "!!", "..<", "->", "::", "==",
    "!=",  "<=",  ">=", "&&", "||", "++",  "--", "+=", "-=",
    "*=",  "/=",  "%=", "..", "@",  ".",   "<<"};

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

class Lexer {
 public:
  Lexer(std::string_view text, Language language)
      : text_(text), language_(language) {}

  LexResult run() {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") {
      pos_ = 3;
    }
    if (text_.find('\0') != std::string_view::npos) {
      result_.binary = true;
      return std::move(result_);
    }
    bool line_start = true;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        advance();
        line_start = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          advance();
        }
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        skip_block_comment();
        continue;
      }
      Token tok;
      tok.line = line_;
      tok.column = column_;
      tok.starts_line = line_start;
      line_start = false;
      std::size_t start = pos_;
      int last_line = line_;
      int last_column = column_;
      auto mark_last = [&] {
        last_line = line_;
        last_column = column_;
      };

      unsigned char uc = static_cast<unsigned char>(c);
      if (c == '`' && language_ == Language::Kotlin) {
        // Backticked identifier.
        advance();
        while (pos_ < text_.size() && text_[pos_] != '`' &&
               text_[pos_] != '\n') {
          advance();
        }
        mark_last();
        if (pos_ < text_.size() && text_[pos_] == '`') {
          advance();
        }
        tok.kind = TokenKind::Identifier;
        tok.text = text_.substr(start + 1, last_line == tok.line
                                               ? pos_ - start - 2
                                               : pos_ - start - 1);
        tok.end_line = last_line;
        tok.end_column = last_column;
        result_.tokens.push_back(tok);
        continue;
      }
      if (is_ident_start(uc)) {
        while (pos_ < text_.size() &&
               is_ident_part(static_cast<unsigned char>(text_[pos_]))) {
          mark_last();
          advance();
        }
        tok.kind = TokenKind::Identifier;
      } else if (std::isdigit(uc) ||
                 (c == '.' &&
                  std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number(mark_last);
        tok.kind = TokenKind::Number;
      } else if (c == '"') {
        lex_string(mark_last);
        tok.kind = TokenKind::String;
      } else if (c == '\'') {
        lex_char(mark_last);
        tok.kind = TokenKind::Char;
      } else {
        std::size_t len = operator_length();
        for (std::size_t i = 0; i < len; ++i) {
          mark_last();
          advance();
        }
        tok.kind = TokenKind::Operator;
      }
      tok.text = text_.substr(start, pos_ - start);
      tok.end_line = last_line;
      tok.end_column = last_column;
      result_.tokens.push_back(tok);
    }
    return std::move(result_);
  }

 private:
  char peek(std::size_t offset) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }

  void advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
      return;
    }
    // Columns count code points: stay put while inside a multi-byte char.
    if (pos_ < text_.size() &&
        (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) {
      return;
    }
    ++column_;
  }

  void diagnostic(const std::string& message) {
    result_.diagnostics.push_back(
        std::to_string(line_) + ":" + std::to_string(column_) + ": " +
        message);
  }

  void skip_block_comment() {
    int start_line = line_;
    advance();
    advance();
    // Kotlin block comments nest.
    int depth = 1;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '*' && peek(1) == '/') {
        advance();
        advance();
        if (--depth == 0 || language_ == Language::Java) {
          return;
        }
        continue;
      }
      if (language_ == Language::Kotlin && text_[pos_] == '/' &&
          peek(1) == '*') {
        advance();
        advance();
        ++depth;
        continue;
      }
      advance();
    }
    result_.diagnostics.push_back(
        std::to_string(start_line) + ":1: unterminated block comment");
  }

  template <typename Mark>
  void lex_number(Mark& mark_last) {
    std::size_t start = pos_;
    bool hex = peek(0) == '0' && (peek(1) == 'x' || peek(1) == 'X');
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      bool exponent_sign = (c == '+' || c == '-') && !hex && pos_ > start &&
          (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          exponent_sign ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        mark_last();
        advance();
      } else {
        break;
      }
    }
  }

  template <typename Mark>
  void lex_char(Mark& mark_last) {
    mark_last();
    advance();
    while (pos_ < text_.size() && text_[pos_] != '\'' && text_[pos_] != '\n') {
      if (text_[pos_] == '\\') {
        mark_last();
        advance();
      }
      if (pos_ < text_.size()) {
        mark_last();
        advance();
      }
    }
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      mark_last();
      advance();
    } else {
      diagnostic("unterminated character literal");
    }
  }

  template <typename Mark>
  void lex_string(Mark& mark_last) {
    bool triple = peek(1) == '"' && peek(2) == '"';
    if (triple) {
      for (int i = 0; i < 3; ++i) {
        mark_last();
        advance();
      }
      while (pos_ < text_.size()) {
        if (text_[pos_] == '"' && peek(1) == '"' && peek(2) == '"') {
          // Kotlin raw strings may end with extra quotes: """a"""".
          while (peek(3) == '"') {
            mark_last();
            advance();
          }
          for (int i = 0; i < 3; ++i) {
            mark_last();
            advance();
          }
          return;
        }
        if (language_ == Language::Java && text_[pos_] == '\\') {
          mark_last();
          advance();
        } else if (language_ == Language::Kotlin && text_[pos_] == '$' &&
                   peek(1) == '{') {
          skip_template(mark_last);
          continue;
        }
        if (pos_ < text_.size()) {
          mark_last();
          advance();
        }
      }
      diagnostic("unterminated text block");
      return;
    }
    mark_last();
    advance();
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') {
        diagnostic("unterminated string literal");
        return;
      }
      if (text_[pos_] == '\\') {
        mark_last();
        advance();
      } else if (language_ == Language::Kotlin && text_[pos_] == '$' &&
                 peek(1) == '{') {
        skip_template(mark_last);
        continue;
      }
      if (pos_ < text_.size()) {
        mark_last();
        advance();
      }
    }
    if (pos_ < text_.size()) {
      mark_last();
      advance();
    }
  }

  // Skips `${ ... }` inside a Kotlin string, including nested strings.
  template <typename Mark>
  void skip_template(Mark& mark_last) {
    mark_last();
    advance();
    mark_last();
    advance();
    int depth = 1;
    while (pos_ < text_.size() && depth > 0) {
      char c = text_[pos_];
      if (c == '"') {
        lex_string(mark_last);
        continue;
      }
      if (c == '\'') {
        lex_char(mark_last);
        continue;
      }
      if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
      }
      mark_last();
      advance();
    }
  }

  std::size_t operator_length() const {
    std::string_view rest = text_.substr(pos_);
    if (language_ == Language::Kotlin) {
      for (auto op : kKotlinOperators) {
        if (rest.substr(0, op.size()) == op) {
          return op.size();
        }
      }
    } else {
      for (auto op : kJavaOperators) {
        if (rest.substr(0, op.size()) == op) {
          return op.size();
        }
      }
    }
    return 1;
  }

  std::string_view text_;
  Language language_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  LexResult result_;
};

} // namespace

LexResult lex(std::string_view text, Language language) {
  return Lexer(text, language).run();
}

} // namespace conan::detail
