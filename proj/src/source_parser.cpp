// Structural parser for Java and Kotlin.
//
// The parser does not build an expression tree. It finds declarations with a
// member-level walk and, inside bodies, records token-range facts: call
// sites, conditions, try blocks, lambda and anonymous-class bodies. Every
// per-call flag is then derived from containment between those ranges.

#include <algorithm>
#include <array>
#include <cassert>
#include <filesystem>
#include <limits>
#include <map>
#include <unordered_set>

#include "conan/errors.h"
#include "conan/source_model.h"
#include "lexer.h"

namespace conan {

using detail::Token;
using detail::TokenKind;

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

const std::unordered_set<std::string_view> kJavaNonCallWords = {
    "if",     "for",  "while",  "switch", "catch", "synchronized", "return",
    "throw",  "new",  "super",  "this",   "assert", "else",        "try",
    "case",   "instanceof", "do", "yield", "class", "interface",   "enum"};

const std::unordered_set<std::string_view> kKotlinNonCallWords = {
    "if",    "for",   "while", "when",  "catch", "return", "throw",
    "fun",   "constructor", "init", "object", "is", "as",   "in",
    "super", "this",  "try",   "else",  "do",    "val",    "var",
    "class", "interface", "finally", "companion", "typealias", "out",
    "get",   "set"};

const std::unordered_set<std::string_view> kNonTypeWords = {
    "return",  "throw",   "new",     "else",    "case",     "instanceof",
    "yield",   "assert",  "import",  "package", "extends",  "implements",
    "throws",  "default", "class",   "interface", "enum",   "record",
    "break",   "continue", "do",     "try",     "finally",  "synchronized",
    "goto",    "const",   "in",      "is",      "as",       "fun",
    "val",     "var",     "when",    "object",  "typealias", "this",
    "super",   "null",    "true",    "false",   "if",       "while",
    "for",     "switch",  "catch",   "static",  "final",    "public",
    "private", "protected", "abstract", "volatile", "transient", "native"};

const std::unordered_set<std::string_view> kJavaModifiers = {
    "public",   "private",  "protected", "static",   "final",
    "abstract", "native",   "synchronized", "transient", "volatile",
    "strictfp", "default",  "sealed",    "non-sealed"};

const std::unordered_set<std::string_view> kKotlinModifiers = {
    "public",    "private",  "protected", "internal",  "open",
    "final",     "abstract", "override",  "sealed",    "data",
    "inner",     "enum",     "annotation", "lateinit", "const",
    "suspend",   "inline",   "noinline",  "crossinline", "tailrec",
    "operator",  "infix",    "external",  "vararg",    "actual",
    "expect",    "value",    "external",  "reified"};

const std::unordered_set<std::string_view> kKotlinDeclStarts = {
    "fun", "val", "var", "class", "interface", "object", "init",
    "constructor", "companion", "typealias", "enum", "get", "set"};

bool is_eq_op(const Token& t) {
  return t.is("==") || t.is("!=") || t.is("===") || t.is("!==");
}

struct RawCall {
  CallSite site;
  int container = -1;
  std::size_t callee_tok = 0;
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  std::size_t args_open = npos;
  std::size_t args_close = npos;
  std::size_t lambda_open = npos;
  std::size_t lambda_close = npos;
  std::size_t anon_open = npos;
  std::size_t anon_close = npos;
  bool ctor_like = false;
  // Index into the argument list of each paren-argument start token.
  std::vector<std::pair<std::size_t, std::size_t>> arg_ranges;
};

// Lambda, anonymous-class method, or local function body.
struct Body {
  std::size_t begin = 0;  // first token inside
  std::size_t end = 0;    // one past the last token inside
  bool lambda = false;
  int container = -1;
  std::size_t raw_anchor = 0;  // token where the lambda or host begins
  std::optional<std::size_t> host_call;   // raw call index
  std::optional<std::size_t> owner_call;  // raw call index
  std::optional<std::string> method_name;
  std::vector<std::string> params;
  bool implicit_it = false;
  std::size_t loc_begin = 0;
  std::size_t loc_end = 0;
  std::optional<CallbackKind> kind;
};

struct Condition {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  bool null_subject = false;  // `when (x) { null -> ...}`
};

struct RawTry {
  std::size_t keyword = 0;
  std::size_t covered_begin = 0;
  std::size_t covered_end = 0;  // exclusive
  std::size_t last = 0;
  bool catch_nonempty = false;
  int container = -1;
};

struct RawMethod {
  MethodModel model;
};

class Parser {
 public:
  Parser(std::string path, std::string_view text, Language language)
      : path_(std::move(path)), language_(language) {
    auto lexed = detail::lex(text, language);
    if (lexed.binary) {
      throw FatalParseError(path_ + ": binary content, not a source file");
    }
    tokens_ = std::move(lexed.tokens);
    for (auto& d : lexed.diagnostics) {
      diag(d);
    }
    sentinel_.line = tokens_.empty() ? 1 : tokens_.back().end_line;
    sentinel_.column = tokens_.empty() ? 1 : tokens_.back().end_column;
    match_brackets();
  }

  SourceUnit run() {
    unit_.path = path_;
    unit_.language = language_;
    parse_file();
    if (!tokens_.empty() && recognized_ == 0) {
      throw FatalParseError(
          path_ + ": no recognizable declarations in file");
    }
    collect_variables();
    finish();
    return std::move(unit_);
  }

 private:
  // ---------------------------------------------------------------------
  // Token helpers

  const Token& at(std::size_t i) const {
    return i < tokens_.size() ? tokens_[i] : sentinel_;
  }
  std::size_t size() const {
    return tokens_.size();
  }
  bool kotlin() const {
    return language_ == Language::Kotlin;
  }
  std::size_t match(std::size_t i) const {
    return i < match_.size() ? match_[i] : npos;
  }
  // Closing index of the group opened at i, clamped to the token count.
  std::size_t close_of(std::size_t i) const {
    std::size_t m = match(i);
    return m == npos ? size() : m;
  }

  void diag(const std::string& message) {
    unit_.diagnostics.push_back(path_ + ":" + message);
  }
  void diag_at(std::size_t i, const std::string& message) {
    diag(
        std::to_string(at(i).line) + ":" + std::to_string(at(i).column) +
        ": " + message);
  }

  SourceLocation location(std::size_t first, std::size_t last) const {
    if (last < first || last >= size()) {
      last = std::min(std::max(first, last), size() == 0 ? 0 : size() - 1);
    }
    SourceLocation loc;
    loc.path = path_;
    loc.line = at(first).line;
    loc.column = at(first).column;
    loc.end_line = at(last).end_line;
    loc.end_column = at(last).end_column;
    if (loc.end_line < loc.line ||
        (loc.end_line == loc.line && loc.end_column < loc.column)) {
      loc.end_line = loc.line;
      loc.end_column = loc.column;
    }
    return loc;
  }

  void match_brackets() {
    match_.assign(size(), npos);
    std::vector<std::size_t> stack;
    auto closer_for = [](std::string_view open) {
      return open == "(" ? ")" : open == "[" ? "]" : "}";
    };
    for (std::size_t i = 0; i < size(); ++i) {
      const Token& t = tokens_[i];
      if (t.kind != TokenKind::Operator) {
        continue;
      }
      if (t.is("(") || t.is("[") || t.is("{")) {
        stack.push_back(i);
      } else if (t.is(")") || t.is("]") || t.is("}")) {
        auto it = std::find_if(stack.rbegin(), stack.rend(), [&](auto o) {
          return closer_for(tokens_[o].text) == t.text;
        });
        if (it == stack.rend()) {
          diag_at(i, "unmatched '" + std::string(t.text) + "'");
          continue;
        }
        while (stack.back() != *it) {
          abandon(stack.back());
          stack.pop_back();
        }
        match_[i] = stack.back();
        match_[stack.back()] = i;
        stack.pop_back();
      }
    }
    for (auto open : stack) {
      abandon(open);
    }
  }

  // An unclosed `(` or `[` ends just before the next `{`, `}` or `;`, so
  // the damage stays within one statement or declaration header.
  void abandon(std::size_t open) {
    diag_at(open, "unclosed '" + std::string(tokens_[open].text) + "'");
    if (tokens_[open].is("{")) {
      return;
    }
    std::size_t j = open + 1;
    while (j < size() &&
           !(tokens_[j].kind == TokenKind::Operator &&
             (tokens_[j].is("{") || tokens_[j].is("}") || tokens_[j].is(";")))) {
      ++j;
    }
    match_[open] = j - 1;
  }

  // Forward match of a generic argument list starting at `<`.
  std::size_t match_angle(std::size_t i) const {
    if (!at(i).is("<")) {
      return npos;
    }
    int depth = 0;
    for (std::size_t j = i; j < size() && j < i + 96; ++j) {
      const Token& t = tokens_[j];
      if (t.is("<")) {
        ++depth;
      } else if (t.is(">")) {
        if (--depth == 0) {
          return j;
        }
      } else if (t.is("[") || t.is("(")) {
        // Function types `(A) -> B` and arrays inside type arguments.
        std::size_t m = match(j);
        if (m == npos) {
          return npos;
        }
        j = m;
      } else if (!(t.is_identifier() || t.is(".") || t.is(",") ||
                   t.is("?") || t.is("*") || t.is("]") || t.is("&") ||
                   t.is("@") || t.is(":") || t.is("->"))) {
        return npos;
      }
    }
    return npos;
  }

  std::size_t match_angle_back(std::size_t i) const {
    if (!at(i).is(">")) {
      return npos;
    }
    int depth = 0;
    for (std::size_t j = i + 1; j-- > 0 && j + 96 > i;) {
      const Token& t = tokens_[j];
      if (t.is(">")) {
        ++depth;
      } else if (t.is("<")) {
        if (--depth == 0) {
          return j;
        }
      } else if (t.is("]") || t.is(")")) {
        std::size_t m = match(j);
        if (m == npos) {
          return npos;
        }
        j = m;
      } else if (!(t.is_identifier() || t.is(".") || t.is(",") ||
                   t.is("?") || t.is("*") || t.is("[") || t.is("&") ||
                   t.is("@"))) {
        return npos;
      }
      if (j == 0) {
        break;
      }
    }
    return npos;
  }

  bool non_call_word(const Token& t) const {
    return kotlin() ? kKotlinNonCallWords.contains(t.text)
                    : kJavaNonCallWords.contains(t.text);
  }

  // ---------------------------------------------------------------------
  // File and member level

  void parse_file() {
    std::size_t i = 0;
    while (i < size()) {
      const Token& t = at(i);
      if (t.is("@") && at(i + 1).is("file") && at(i + 2).is(":")) {
        i = skip_annotation(i);
        continue;
      }
      if (t.is("package")) {
        ++recognized_;
        i = skip_qualified_statement(i);
        continue;
      }
      if (t.is("import")) {
        ++recognized_;
        i = parse_import(i);
        continue;
      }
      break;
    }
    MemberContext ctx;
    ctx.facade = kotlin() ? kotlin_facade_name() : "";
    parse_members(i, size(), ctx);
  }

  std::string kotlin_facade_name() const {
    std::string stem = std::filesystem::path(path_).stem().string();
    if (!stem.empty()) {
      stem[0] = static_cast<char>(std::toupper(stem[0]));
    }
    return stem + "Kt";
  }

  // `package a.b.c` / Java `;` terminated or Kotlin end of line.
  std::size_t skip_qualified_statement(std::size_t i) {
    std::size_t j = i + 1;
    while (j < size()) {
      if (at(j).is(";")) {
        return j + 1;
      }
      if (at(j).starts_line) {
        return j;
      }
      ++j;
    }
    return j;
  }

  std::size_t parse_import(std::size_t i) {
    std::size_t j = i + 1;
    if (at(j).is("static")) {
      ++j;
    }
    std::string name;
    while (j < size() && !at(j).is(";") &&
           (j == i + 1 || !at(j).starts_line)) {
      if (at(j).is("as")) {
        // Kotlin alias: the alias itself is not part of the import.
        j += 2;
        break;
      }
      name += at(j).text;
      ++j;
    }
    if (at(j).is(";")) {
      ++j;
    }
    if (!name.empty()) {
      unit_.imports.insert(name);
      unit_.import_locations.emplace_back(name, location(i, j - 1));
    }
    return j;
  }

  struct MemberContext {
    std::string type_path;  // dotted enclosing type names
    std::string facade;     // Kotlin file facade for top-level functions
    // Set inside method bodies: every member's code belongs to it.
    std::optional<int> container;
    std::optional<std::size_t> anon_host;  // raw call creating the object
    bool enum_body = false;
    bool top_level = false;
  };

  std::size_t skip_annotation(std::size_t i) {
    // @Name, @a.b.Name, @Name(args), @file:Name(args), @get:Name
    std::size_t j = i + 1;
    if (at(j + 1).is(":") && at(j).is_identifier()) {
      j += 2;
    }
    if (at(j).is("[")) {
      return close_of(j) + 1;
    }
    while (at(j).is_identifier()) {
      ++j;
      if (at(j).is(".") && at(j + 1).is_identifier()) {
        ++j;
        continue;
      }
      break;
    }
    if (at(j).is("<")) {
      std::size_t m = match_angle(j);
      if (m != npos) {
        j = m + 1;
      }
    }
    if (at(j).is("(") && !at(j).starts_line) {
      j = close_of(j) + 1;
    }
    return j;
  }

  void parse_members(std::size_t b, std::size_t e, MemberContext ctx) {
    if (kotlin()) {
      parse_kotlin_members(b, e, ctx);
    } else {
      parse_java_members(b, e, ctx);
    }
  }

  // Finds the `{` opening a type body after a declaration header. Stops at
  // `;`, and for Kotlin at a new line starting another declaration.
  std::size_t find_type_body(std::size_t i, std::size_t e) const {
    std::size_t j = i;
    while (j < e) {
      const Token& t = at(j);
      if (t.is("{")) {
        return j;
      }
      if (t.is(";") || t.is("}")) {
        return npos;
      }
      if (kotlin() && j > i && t.starts_line &&
          (kKotlinDeclStarts.contains(t.text) ||
           kKotlinModifiers.contains(t.text) || t.is("@") ||
           t.is("private") || t.is("public") || t.is("internal") ||
           t.is("protected"))) {
        return npos;
      }
      if (t.is("(") || t.is("[")) {
        j = close_of(j) + 1;
        continue;
      }
      ++j;
    }
    return npos;
  }

  // Java ---------------------------------------------------------------

  void parse_java_members(std::size_t b, std::size_t e, MemberContext ctx) {
    std::size_t i = b;
    if (ctx.enum_body) {
      i = parse_enum_constants(i, e, ctx);
    }
    while (i < e) {
      std::size_t start = i;
      while (i < e && (at(i).is("@") || kJavaModifiers.contains(at(i).text))) {
        if (at(i).is("@") && at(i + 1).is("interface")) {
          break;
        }
        i = at(i).is("@") ? skip_annotation(i) : i + 1;
      }
      if (i >= e) {
        break;
      }
      const Token& t = at(i);
      if (t.is(";")) {
        ++i;
        continue;
      }
      if (t.is("class") || t.is("interface") || t.is("enum") ||
          t.is("record") || (t.is("@") && at(i + 1).is("interface"))) {
        i = parse_type_decl(i, e, ctx);
        continue;
      }
      if (t.is("{")) {
        // Instance or static initializer.
        ++recognized_;
        std::size_t close = close_of(i);
        scan(i + 1, close, ctx.container.value_or(-1));
        i = close + 1;
        continue;
      }
      std::size_t j = i;
      std::size_t stop = npos;
      while (j < e) {
        const Token& u = at(j);
        if (u.is("(") || u.is("=") || u.is(";") || u.is("{")) {
          stop = j;
          break;
        }
        if (u.is("[")) {
          j = close_of(j) + 1;
          continue;
        }
        ++j;
      }
      if (stop == npos) {
        diag_at(start, "unrecognized member");
        break;
      }
      if (at(stop).is("(") && stop > i && at(stop - 1).is_identifier()) {
        i = parse_java_method(stop - 1, e, ctx);
        continue;
      }
      if (at(stop).is("=")) {
        ++recognized_;
        std::size_t end = stop + 1;
        while (end < e && !at(end).is(";")) {
          if (at(end).is("(") || at(end).is("[") || at(end).is("{")) {
            end = close_of(end);
          }
          ++end;
        }
        scan(stop + 1, end, ctx.container.value_or(-1));
        i = end + 1;
        continue;
      }
      if (at(stop).is(";")) {
        ++recognized_;
        i = stop + 1;
        continue;
      }
      diag_at(start, "unrecognized member");
      i = at(stop).is("{") ? close_of(stop) + 1 : stop + 1;
    }
  }

  std::size_t parse_enum_constants(
      std::size_t i,
      std::size_t e,
      const MemberContext& ctx) {
    std::size_t j = i;
    std::size_t segment = i;
    while (j < e && !at(j).is(";")) {
      if (at(j).is("(") || at(j).is("[")) {
        j = close_of(j) + 1;
        continue;
      }
      if (at(j).is("{")) {
        scan(segment, j, ctx.container.value_or(-1));
        std::size_t close = close_of(j);
        MemberContext body = ctx;
        body.enum_body = false;
        parse_java_members(j + 1, close, body);
        j = close + 1;
        segment = j;
        continue;
      }
      ++j;
    }
    scan(segment, std::min(j, e), ctx.container.value_or(-1));
    return j < e ? j + 1 : e;
  }

  std::size_t parse_type_decl(
      std::size_t i,
      std::size_t e,
      const MemberContext& ctx) {
    bool is_enum = at(i).is("enum") ||
        (kotlin() && at(i).is("class") && i > 0 && at(i - 1).is("enum"));
    std::size_t name_tok = at(i).is("@") ? i + 2 : i + 1;
    std::string name;
    if (at(i).is("object") && at(i - 1).is("companion") &&
        !at(name_tok).is_identifier()) {
      name = "Companion";
      name_tok = i;
    } else if (at(name_tok).is_identifier()) {
      name = std::string(at(name_tok).text);
    } else {
      diag_at(i, "type declaration without a name");
      return i + 1;
    }
    ++recognized_;
    std::string qualified =
        ctx.type_path.empty() ? name : ctx.type_path + "." + name;
    unit_.types_declared.push_back(qualified);
    std::size_t body = find_type_body(name_tok + 1, e);
    if (body == npos) {
      // Header only. Kotlin primary constructors and supertype calls can
      // still hold code; skip them.
      std::size_t j = name_tok + 1;
      while (j < e && !at(j).is(";") &&
             !(kotlin() && at(j).starts_line && j > name_tok + 1 &&
               !at(j).is(":") && !at(j).is(",") && !at(j).is(".") &&
               !at(j - 1).is(",") && !at(j - 1).is(":"))) {
        if (at(j).is("(") || at(j).is("[") || at(j).is("{")) {
          j = close_of(j);
        }
        ++j;
      }
      return at(j).is(";") ? j + 1 : j;
    }
    std::size_t close = close_of(body);
    MemberContext inner;
    inner.type_path = qualified;
    inner.facade = ctx.facade;
    inner.container = ctx.container;
    inner.enum_body = is_enum;
    parse_members(body + 1, close, inner);
    return close + 1;
  }

  std::size_t parse_java_method(
      std::size_t name_tok,
      std::size_t e,
      const MemberContext& ctx) {
    ++recognized_;
    std::size_t params_open = name_tok + 1;
    std::size_t params_close = close_of(params_open);
    std::size_t j = params_close + 1;
    while (j < e && !at(j).is("{") && !at(j).is(";")) {
      if (at(j).is("(") || at(j).is("[")) {
        j = close_of(j);
      }
      ++j;
    }
    std::string name(at(name_tok).text);
    if (ctx.container) {
      // Method of an anonymous or local class: its code belongs to the
      // enclosing method.
      if (at(j).is("{")) {
        std::size_t close = close_of(j);
        add_body(j, close, *ctx.container, false, name_tok, ctx.anon_host,
                 name, param_names(params_open, params_close), name_tok);
        scan(j + 1, close, *ctx.container);
        return close + 1;
      }
      return j + 1;
    }
    MethodModel method;
    method.name = name;
    method.qualified_name =
        ctx.type_path.empty() ? name : ctx.type_path + "." + name;
    int index = static_cast<int>(methods_.size());
    if (at(j).is("{")) {
      std::size_t close = close_of(j);
      method.location = location(name_tok, std::min(close, size() - 1));
      methods_.push_back(std::move(method));
      scan(j + 1, close, index);
      return close + 1;
    }
    method.location = location(name_tok, std::min(j, size() - 1));
    methods_.push_back(std::move(method));
    return j + 1;
  }

  // Names of parameters in a Java or Kotlin parameter list.
  std::vector<std::string> param_names(std::size_t open, std::size_t close) {
    std::vector<std::string> names;
    std::size_t seg = open + 1;
    auto flush = [&](std::size_t end) {
      if (end <= seg) {
        return;
      }
      if (kotlin()) {
        for (std::size_t k = seg; k < end; ++k) {
          if (at(k).is_identifier() && at(k + 1).is(":") &&
              !kKotlinModifiers.contains(at(k).text)) {
            names.emplace_back(at(k).text);
            return;
          }
        }
        if (at(seg).is_identifier()) {
          names.emplace_back(at(seg).text);
        }
        return;
      }
      for (std::size_t k = end; k-- > seg;) {
        if (at(k).is_identifier()) {
          names.emplace_back(at(k).text);
          return;
        }
        if (!at(k).is("]") && !at(k).is("[")) {
          return;
        }
      }
    };
    for (std::size_t k = open + 1; k < close; ++k) {
      if (at(k).is("(") || at(k).is("[") || at(k).is("{")) {
        k = close_of(k);
        continue;
      }
      if (at(k).is("<")) {
        std::size_t m = match_angle(k);
        if (m != npos) {
          k = m;
          continue;
        }
      }
      if (at(k).is(",")) {
        flush(k);
        seg = k + 1;
      }
    }
    flush(close);
    return names;
  }

  // Kotlin -------------------------------------------------------------

  // End of a Kotlin expression starting at i: a `;`, an unmatched closer, or
  // a line break that is not a continuation.
  std::size_t kotlin_expr_end(std::size_t i, std::size_t e) const {
    static const std::unordered_set<std::string_view> kContinuesNext = {
        ".", "?.", "?:", "&&", "||", "+", "-", "*", "/", "%", "=", "==",
        "!=", "===", "!==", "<", ">", "<=", ">=", "->", ",", "(", "[",
        "..", "as", "is", "in", "!", "::", "+=", "-="};
    static const std::unordered_set<std::string_view> kContinuesPrev = {
        ".", "?.", "?:", "&&", "||", "+", "-", "*", "/", "%", "=", "->",
        "..", "as", "is", "!!", "::", "else", "catch", "finally",
        "==", "!="};
    std::size_t j = i;
    std::size_t last = npos;
    while (j < e) {
      const Token& t = at(j);
      if (t.is(";") || t.is(")") || t.is("]") || t.is("}")) {
        return j;
      }
      if (last != npos && t.starts_line &&
          !kContinuesNext.contains(at(last).text) &&
          !kContinuesPrev.contains(t.text)) {
        return j;
      }
      if (t.is("(") || t.is("[") || t.is("{")) {
        last = close_of(j);
        j = last + 1;
        continue;
      }
      last = j;
      ++j;
    }
    return std::min(j, e);
  }

  void parse_kotlin_members(std::size_t b, std::size_t e, MemberContext ctx) {
    std::size_t i = b;
    if (ctx.enum_body) {
      // Enum entries run until `;` or the first declaration.
      std::size_t j = i;
      while (j < e && !at(j).is(";") &&
             !kKotlinDeclStarts.contains(at(j).text) &&
             !kKotlinModifiers.contains(at(j).text) && !at(j).is("@")) {
        if (at(j).is("(") || at(j).is("[")) {
          j = close_of(j) + 1;
          continue;
        }
        if (at(j).is("{")) {
          std::size_t close = close_of(j);
          MemberContext body = ctx;
          body.enum_body = false;
          parse_kotlin_members(j + 1, close, body);
          j = close + 1;
          continue;
        }
        ++j;
      }
      scan(i, j, ctx.container.value_or(-1));
      i = at(j).is(";") ? j + 1 : j;
    }
    while (i < e) {
      std::size_t start = i;
      while (i < e) {
        if (at(i).is("@")) {
          i = skip_annotation(i);
          continue;
        }
        if ((kKotlinModifiers.contains(at(i).text) ||
             at(i).is("companion")) &&
            at(i + 1).is_identifier()) {
          ++i;
          continue;
        }
        break;
      }
      if (i >= e) {
        break;
      }
      const Token& t = at(i);
      if (t.is(";")) {
        ++i;
        continue;
      }
      if (t.is("class") || t.is("interface") ||
          (t.is("object") && !at(i + 1).is(":") && !at(i + 1).is("{")) ||
          (t.is("object") && at(i - 1).is("companion"))) {
        i = parse_type_decl(i, e, ctx);
        continue;
      }
      if (t.is("fun")) {
        if (at(i + 1).is("interface")) {
          i = parse_type_decl(i + 1, e, ctx);
          continue;
        }
        i = parse_kotlin_fun(i, e, ctx);
        continue;
      }
      if (t.is("val") || t.is("var")) {
        i = parse_kotlin_property(i, e, ctx);
        continue;
      }
      if (t.is("init") && at(i + 1).is("{")) {
        ++recognized_;
        std::size_t close = close_of(i + 1);
        scan(i + 2, close, ctx.container.value_or(-1));
        i = close + 1;
        continue;
      }
      if (t.is("constructor") && at(i + 1).is("(")) {
        i = parse_kotlin_constructor(i, e, ctx);
        continue;
      }
      if (t.is("typealias")) {
        ++recognized_;
        i = kotlin_expr_end(i + 1, e);
        continue;
      }
      diag_at(start, "unrecognized declaration '" + std::string(t.text) + "'");
      if (t.is("{") || t.is("(") || t.is("[")) {
        i = close_of(i) + 1;
      } else {
        i = std::max(kotlin_expr_end(i + 1, e), i + 1);
      }
    }
  }

  std::size_t parse_kotlin_fun(
      std::size_t fun_tok,
      std::size_t e,
      const MemberContext& ctx) {
    ++recognized_;
    std::size_t j = fun_tok + 1;
    if (at(j).is("<")) {
      std::size_t m = match_angle(j);
      j = m == npos ? j + 1 : m + 1;
    }
    // Optional receiver type, then the name right before `(`.
    std::size_t name_tok = npos;
    while (j < e && !at(j).is("(")) {
      if (at(j).is("<")) {
        std::size_t m = match_angle(j);
        if (m != npos) {
          j = m + 1;
          continue;
        }
      }
      if (at(j).is_identifier()) {
        name_tok = j;
      }
      if (at(j).is("{") || at(j).is("=") || at(j).starts_line) {
        if (j > fun_tok + 1 && at(j).starts_line) {
          break;
        }
      }
      ++j;
    }
    if (name_tok == npos || !at(j).is("(")) {
      diag_at(fun_tok, "malformed function declaration");
      return std::max(j, fun_tok + 1);
    }
    std::size_t params_open = j;
    std::size_t params_close = close_of(j);
    std::size_t k = params_close + 1;
    // Return type and `where` clause.
    while (k < e && !at(k).is("{") && !at(k).is("=") && !at(k).is(";") &&
           !at(k).is("}")) {
      if (at(k).starts_line && !at(k).is(":") && !at(k - 1).is(":") &&
          !at(k).is("where") && !at(k - 1).is(",") && !at(k).is(".") &&
          !at(k - 1).is(".")) {
        break;
      }
      if (at(k).is("(") || at(k).is("[")) {
        k = close_of(k);
      } else if (at(k).is("<")) {
        std::size_t m = match_angle(k);
        if (m != npos) {
          k = m;
        }
      }
      ++k;
    }
    std::string name(at(name_tok).text);
    std::size_t body_begin = npos;
    std::size_t body_end = npos;
    std::size_t next = k;
    bool block = false;
    if (at(k).is("{")) {
      body_begin = k + 1;
      body_end = close_of(k);
      next = body_end + 1;
      block = true;
    } else if (at(k).is("=")) {
      body_begin = k + 1;
      body_end = kotlin_expr_end(k + 1, e);
      next = body_end;
    }
    if (ctx.container) {
      if (body_begin != npos) {
        add_body(block ? k : body_begin, body_end, *ctx.container, false,
                 name_tok, ctx.anon_host, name,
                 param_names(params_open, params_close), name_tok,
                 block ? npos : body_begin);
        scan(body_begin, body_end, *ctx.container);
      }
      return next;
    }
    MethodModel method;
    method.name = name;
    std::string owner = ctx.type_path.empty() ? ctx.facade : ctx.type_path;
    method.qualified_name = owner.empty() ? name : owner + "." + name;
    std::size_t last = body_end == npos ? params_close
                       : block         ? body_end
                                       : body_end - 1;
    method.location = location(name_tok, std::min(last, size() - 1));
    int index = static_cast<int>(methods_.size());
    methods_.push_back(std::move(method));
    if (body_begin != npos) {
      scan(body_begin, body_end, index);
    }
    return next;
  }

  std::size_t parse_kotlin_constructor(
      std::size_t ctor_tok,
      std::size_t e,
      const MemberContext& ctx) {
    ++recognized_;
    std::size_t params_close = close_of(ctor_tok + 1);
    std::size_t k = params_close + 1;
    std::size_t delegation_begin = npos;
    if (at(k).is(":")) {
      delegation_begin = k + 1;
      while (k < e && !at(k).is("{") &&
             !(at(k).starts_line && k > delegation_begin)) {
        if (at(k).is("(")) {
          k = close_of(k);
        }
        ++k;
      }
    }
    std::string simple = ctx.type_path.substr(ctx.type_path.rfind('.') + 1);
    if (ctx.container) {
      if (at(k).is("{")) {
        std::size_t close = close_of(k);
        scan(k + 1, close, *ctx.container);
        return close + 1;
      }
      return k;
    }
    MethodModel method;
    method.name = simple;
    method.qualified_name = ctx.type_path + "." + simple;
    int index = static_cast<int>(methods_.size());
    std::size_t next = k;
    if (at(k).is("{")) {
      std::size_t close = close_of(k);
      method.location = location(ctor_tok, std::min(close, size() - 1));
      methods_.push_back(std::move(method));
      scan(k + 1, close, index);
      next = close + 1;
    } else {
      method.location = location(ctor_tok, params_close);
      methods_.push_back(std::move(method));
    }
    if (delegation_begin != npos) {
      scan(delegation_begin, std::min(k, e), index);
    }
    return next;
  }

  std::size_t parse_kotlin_property(
      std::size_t kw,
      std::size_t e,
      const MemberContext& ctx) {
    ++recognized_;
    int container = ctx.container.value_or(-1);
    std::size_t j = kw + 1;
    // Skip name, receiver, type up to `=` / `by` / end of declaration.
    while (j < e) {
      const Token& t = at(j);
      if (t.is("=") || t.is("by") || t.is(";") || t.is("{") ||
          (j > kw + 1 && t.starts_line && !at(j - 1).is(":") &&
           !t.is(":") && !t.is(".") && !at(j - 1).is("."))) {
        break;
      }
      if (t.is("(") || t.is("[")) {
        j = close_of(j) + 1;
        continue;
      }
      if (t.is("<")) {
        std::size_t m = match_angle(j);
        if (m != npos) {
          j = m + 1;
          continue;
        }
      }
      ++j;
    }
    if (at(j).is("=") || at(j).is("by")) {
      std::size_t end = kotlin_expr_end(j + 1, e);
      scan(j + 1, end, container);
      j = end;
    }
    // Accessors.
    while (j < e) {
      std::size_t a = j;
      while (a < e && (kKotlinModifiers.contains(at(a).text) ||
                       at(a).is("private") || at(a).is("public") ||
                       at(a).is("internal") || at(a).is("protected"))) {
        ++a;
      }
      if (!(at(a).is("get") || at(a).is("set"))) {
        break;
      }
      std::size_t k = a + 1;
      if (at(k).is("(")) {
        k = close_of(k) + 1;
      } else {
        // `private set` with no body.
        j = k;
        continue;
      }
      if (at(k).is(":")) {
        while (k < e && !at(k).is("{") && !at(k).is("=")) {
          ++k;
        }
      }
      if (at(k).is("{")) {
        std::size_t close = close_of(k);
        scan(k + 1, close, container);
        j = close + 1;
      } else if (at(k).is("=")) {
        std::size_t end = kotlin_expr_end(k + 1, e);
        scan(k + 1, end, container);
        j = end;
      } else {
        j = k;
      }
    }
    return at(j).is(";") ? j + 1 : std::max(j, kw + 1);
  }

  // ---------------------------------------------------------------------
  // Bodies

  std::size_t add_body(
      std::size_t open,
      std::size_t close,
      int container,
      bool lambda,
      std::size_t anchor,
      std::optional<std::size_t> host,
      std::optional<std::string> method_name,
      std::vector<std::string> params,
      std::size_t loc_begin,
      std::size_t expr_begin = npos) {
    Body body;
    body.begin = expr_begin != npos ? expr_begin : open + 1;
    body.end = close;
    body.lambda = lambda;
    body.container = container;
    body.raw_anchor = anchor;
    body.host_call = host;
    body.method_name = std::move(method_name);
    body.params = std::move(params);
    body.loc_begin = loc_begin;
    body.loc_end = expr_begin != npos ? (close > 0 ? close - 1 : 0) : close;
    bodies_.push_back(std::move(body));
    return bodies_.size() - 1;
  }

  // Walks a statement/expression range, recording facts.
  void scan(std::size_t b, std::size_t e, int container) {
    e = std::min(e, size());
    for (std::size_t i = b; i < e; ++i) {
      const Token& t = at(i);
      if (t.kind == TokenKind::Operator) {
        if (t.is("{")) {
          i = on_brace(i, e, container);
          continue;
        }
        if (t.is("->") && !kotlin()) {
          on_java_arrow(i, container);
          continue;
        }
        if (t.is("?") && !kotlin()) {
          on_ternary(i);
          continue;
        }
        if ((t.is(".") || t.is("?.")) && at(i + 1).is_identifier()) {
          maybe_property(i + 1, container);
        }
        continue;
      }
      if (!t.is_identifier()) {
        continue;
      }
      if (i > 0 && (at(i - 1).is(".") || at(i - 1).is("?.")) &&
          !at(i + 1).is("(") && !at(i + 1).is("<") && !at(i + 1).is("{")) {
        continue;  // property handled at the dot
      }
      if (t.is("new") && !kotlin()) {
        i = on_new(i, e, container);
        continue;
      }
      if (t.is("object") && kotlin() && (at(i + 1).is(":") ||
                                          at(i + 1).is("{"))) {
        i = on_object_expression(i, e, container);
        continue;
      }
      if (t.is("try")) {
        on_try(i, container);
        continue;
      }
      if ((t.is("if") || t.is("while") || t.is("switch") ||
           t.is("when")) && at(i + 1).is("(")) {
        std::size_t close = close_of(i + 1);
        Condition cond;
        cond.begin = i + 2;
        cond.end = close;
        conditions_.push_back(cond);
        std::size_t cond_index = conditions_.size() - 1;
        if (at(close + 1).is("{")) {
          blocks_.insert(close + 1);
          if (t.is("when")) {
            on_when_body(close + 1, cond_index);
          }
        }
        continue;
      }
      if (t.is("when") && kotlin() && at(i + 1).is("{")) {
        blocks_.insert(i + 1);
        on_when_body(i + 1, npos);
        continue;
      }
      if ((t.is("for") || t.is("catch") || t.is("synchronized")) &&
          at(i + 1).is("(")) {
        std::size_t close = close_of(i + 1);
        if (at(close + 1).is("{")) {
          blocks_.insert(close + 1);
        }
        if (t.is("synchronized") && kotlin()) {
          // Kotlin `synchronized(lock) { }` is an ordinary call.
          on_call(i, container);
        }
        continue;
      }
      if (t.is("else") || t.is("do") || t.is("finally") || t.is("init")) {
        if (at(i + 1).is("{")) {
          blocks_.insert(i + 1);
        }
        continue;
      }
      if ((t.is("class") || t.is("interface") || t.is("enum")) &&
          !(i > 0 && (at(i - 1).is(".") || at(i - 1).is("::")))) {
        // Local type: its members run as part of this container.
        MemberContext ctx;
        ctx.type_path = current_type_hint(container);
        ctx.container = container;
        std::size_t next = parse_type_decl(i, e, ctx);
        i = next - 1;
        continue;
      }
      if (t.is("fun") && kotlin()) {
        MemberContext ctx;
        ctx.container = container;
        std::size_t next = parse_kotlin_fun(i, e, ctx);
        i = std::max(next, i + 1) - 1;
        continue;
      }
      if (i > 0 && at(i - 1).is("@")) {
        // Annotation: skip its arguments.
        if (at(i + 1).is("(")) {
          i = close_of(i + 1);
        }
        continue;
      }
      if (i > 0 && at(i - 1).is("::")) {
        continue;
      }
      if (non_call_word(t)) {
        continue;
      }
      if (at(i + 1).is("(")) {
        on_call(i, container);
        continue;
      }
      if (at(i + 1).is("<")) {
        std::size_t m = match_angle(i + 1);
        if (m != npos && (at(m + 1).is("(") ||
                          (kotlin() && at(m + 1).is("{") &&
                           !blocks_.contains(m + 1)))) {
          on_call(i, container);
        }
        continue;
      }
      if (kotlin() && at(i + 1).is("{") && !blocks_.contains(i + 1) &&
          !anon_bodies_.contains(i + 1)) {
        on_call(i, container);
        continue;
      }
    }
  }

  std::string current_type_hint(int container) const {
    if (container < 0 || container >= static_cast<int>(methods_.size())) {
      return "";
    }
    const auto& q = methods_[container].qualified_name;
    auto dot = q.rfind('.');
    return dot == std::string::npos ? "" : q.substr(0, dot);
  }

  std::size_t on_brace(std::size_t i, std::size_t e, int container) {
    (void)e;
    if (auto it = anon_bodies_.find(i); it != anon_bodies_.end()) {
      std::size_t close = close_of(i);
      MemberContext ctx;
      ctx.container = container;
      ctx.anon_host = it->second;
      add_body(i, close, container, false, i, it->second, std::nullopt, {},
               i);
      parse_members(i + 1, close, ctx);
      return close;
    }
    if (blocks_.contains(i) || !kotlin()) {
      return i;  // plain block, keep scanning inside
    }
    // Kotlin lambda.
    std::size_t close = close_of(i);
    std::vector<std::string> params;
    std::size_t body_begin = i + 1;
    std::size_t arrow = npos;
    for (std::size_t k = i + 1; k < close; ++k) {
      const Token& u = at(k);
      if (u.is("->")) {
        arrow = k;
        break;
      }
      if (u.is("(")) {
        k = close_of(k);
        continue;
      }
      if (u.is("<")) {
        std::size_t m = match_angle(k);
        if (m != npos) {
          k = m;
          continue;
        }
      }
      if (!(u.is_identifier() || u.is(",") || u.is(":") || u.is(".") ||
            u.is("?") || u.is(">"))) {
        break;
      }
    }
    bool implicit_it = arrow == npos;
    if (arrow != npos) {
      std::size_t seg = i + 1;
      for (std::size_t k = i + 1; k <= arrow; ++k) {
        if (at(k).is("(")) {
          // Destructuring: take the names inside.
          std::size_t m = close_of(k);
          for (std::size_t d = k + 1; d < m; ++d) {
            if (at(d).is_identifier() && !at(d - 1).is(":")) {
              params.emplace_back(at(d).text);
            }
          }
          k = m;
          seg = m + 1;
          continue;
        }
        if (at(k).is(",") || k == arrow) {
          if (seg < k && at(seg).is_identifier()) {
            params.emplace_back(at(seg).text);
          }
          seg = k + 1;
        }
      }
      body_begin = arrow + 1;
    }
    std::size_t index =
        add_body(i, close, container, true, i, std::nullopt, std::nullopt,
                 std::move(params), i);
    bodies_[index].implicit_it = implicit_it;
    bodies_[index].begin = body_begin;
    // Parameter list tokens are not code; skip them.
    if (arrow != npos) {
      return arrow;
    }
    return i;
  }

  void on_java_arrow(std::size_t arrow, int container) {
    if (arrow == 0) {
      return;
    }
    std::size_t params_begin;
    std::vector<std::string> params;
    const Token& prev = at(arrow - 1);
    if (prev.is(")")) {
      params_begin = match(arrow - 1);
      if (params_begin == npos) {
        return;
      }
      params = param_names(params_begin, arrow - 1);
    } else if (prev.is_identifier() && !kNonTypeWords.contains(prev.text)) {
      params_begin = arrow - 1;
      params.emplace_back(prev.text);
    } else {
      return;  // `default ->`
    }
    // Switch rules (`case A, B ->`) are not lambdas.
    for (std::size_t k = params_begin; k-- > 0;) {
      const Token& u = at(k);
      if (u.is("case") || u.is("default")) {
        return;
      }
      if (u.is(")") || u.is("]")) {
        std::size_t m = match(k);
        if (m == npos) {
          break;
        }
        k = m;
        continue;
      }
      if (u.is(";") || u.is("{") || u.is("}") || u.is("(") || u.is("=") ||
          u.is("->")) {
        break;
      }
      if (k == 0) {
        break;
      }
    }
    std::size_t body_open = arrow + 1;
    if (at(body_open).is("{")) {
      std::size_t close = close_of(body_open);
      blocks_.insert(body_open);
      add_body(body_open, close, container, true, params_begin, std::nullopt,
               std::nullopt, std::move(params), params_begin);
      return;
    }
    // Expression body: up to `,` `)` `;` `}` at depth 0.
    std::size_t k = body_open;
    while (k < size()) {
      const Token& u = at(k);
      if (u.is(",") || u.is(")") || u.is(";") || u.is("}") || u.is("]")) {
        break;
      }
      if (u.is("(") || u.is("[") || u.is("{")) {
        k = close_of(k);
      }
      ++k;
    }
    add_body(body_open, k, container, true, params_begin, std::nullopt,
             std::nullopt, std::move(params), params_begin, body_open);
  }

  void on_ternary(std::size_t q) {
    if (q == 0) {
      return;
    }
    const Token& prev = at(q - 1);
    const Token& next = at(q + 1);
    if (prev.is("<") || prev.is(",") || next.is(">") || next.is("extends") ||
        next.is("super") || next.is(",")) {
      return;  // generic wildcard
    }
    std::size_t k = q;
    while (k-- > 0) {
      const Token& u = at(k);
      if (u.is(")") || u.is("]")) {
        std::size_t m = match(k);
        if (m == npos) {
          break;
        }
        k = m;
        if (k == 0) {
          break;
        }
        continue;
      }
      if (u.is("(") || u.is("[") || u.is("{") || u.is("}") || u.is("=") ||
          u.is("+=") || u.is("-=") || u.is(",") || u.is(";") ||
          u.is("return") || u.is(":") || u.is("?") || u.is("->") ||
          u.is("case") || u.is("yield") || u.is("throw") || u.is("else")) {
        break;
      }
      if (k == 0) {
        k = npos;
        break;
      }
    }
    Condition cond;
    cond.begin = k == npos ? 0 : k + 1;
    cond.end = q;
    conditions_.push_back(cond);
  }

  void on_when_body(std::size_t open, std::size_t subject_cond) {
    std::size_t close = close_of(open);
    std::size_t k = open + 1;
    while (k < close) {
      std::size_t cond_begin = k;
      std::size_t arrow = npos;
      while (k < close) {
        if (at(k).is("->")) {
          arrow = k;
          break;
        }
        if (at(k).is("(") || at(k).is("[") || at(k).is("{")) {
          k = close_of(k);
        }
        ++k;
      }
      if (arrow == npos) {
        break;
      }
      bool is_else = arrow == cond_begin + 1 && at(cond_begin).is("else");
      if (!is_else && arrow > cond_begin) {
        // Each comma-separated value is its own test.
        Condition cond;
        cond.begin = cond_begin;
        cond.end = arrow;
        conditions_.push_back(cond);
        if (subject_cond != npos) {
          for (std::size_t v = cond_begin; v < arrow; ++v) {
            if (at(v).is("null") &&
                (v == cond_begin || at(v - 1).is(",")) &&
                (v + 1 == arrow || at(v + 1).is(","))) {
              conditions_[subject_cond].null_subject = true;
            }
          }
        }
      }
      k = arrow + 1;
      if (at(k).is("{")) {
        blocks_.insert(k);
        k = close_of(k) + 1;
      } else {
        k = kotlin_expr_end(k, close);
        if (at(k).is(";")) {
          ++k;
        }
      }
    }
  }

  void on_try(std::size_t kw, int container) {
    RawTry raw;
    raw.keyword = kw;
    raw.container = container;
    raw.covered_begin = kw + 1;
    std::size_t k = kw + 1;
    if (at(k).is("(")) {
      k = close_of(k) + 1;
    }
    if (!at(k).is("{")) {
      return;
    }
    blocks_.insert(k);
    std::size_t body_close = close_of(k);
    raw.covered_end = body_close;
    raw.last = std::min(body_close, size() - 1);
    k = body_close + 1;
    while (at(k).is("catch") || at(k).is("finally")) {
      bool is_catch = at(k).is("catch");
      std::size_t open = k + 1;
      if (is_catch && at(open).is("(")) {
        open = close_of(open) + 1;
      }
      if (!at(open).is("{")) {
        break;
      }
      blocks_.insert(open);
      std::size_t close = close_of(open);
      if (is_catch) {
        for (std::size_t s = open + 1; s < close; ++s) {
          if (!at(s).is(";")) {
            raw.catch_nonempty = true;
            break;
          }
        }
      }
      raw.last = std::min(close, size() - 1);
      k = close + 1;
    }
    tries_.push_back(raw);
  }

  // Receiver expression ending right before the `.` at `dot`.
  std::size_t receiver_begin(std::size_t dot) const {
    if (dot == 0) {
      return npos;
    }
    std::size_t k = dot - 1;
    std::size_t begin = npos;
    while (true) {
      const Token& u = at(k);
      std::size_t operand_begin = npos;
      if (u.is(")") || u.is("]")) {
        std::size_t m = match(k);
        if (m == npos) {
          break;
        }
        operand_begin = m;
        // Call arguments or index: absorb the callee/array expression.
        if (m > 0) {
          const Token& before = at(m - 1);
          if (before.is_identifier() && !non_call_word(before)) {
            operand_begin = m - 1;
          } else if (before.is(">")) {
            std::size_t a = match_angle_back(m - 1);
            if (a != npos && a > 0 && at(a - 1).is_identifier()) {
              operand_begin = a - 1;
            }
          } else if (before.is(")") || before.is("]")) {
            operand_begin = m;
          }
        }
      } else if (u.is_identifier() || u.kind == TokenKind::String ||
                 u.kind == TokenKind::Number || u.kind == TokenKind::Char) {
        if (non_call_word(u) && !u.is("this") && !u.is("super")) {
          break;
        }
        operand_begin = k;
      } else if (u.is("!!") && k > 0) {
        k -= 1;
        continue;
      } else if (u.is("}") && kotlin()) {
        // Trailing lambda of a receiver call: `list.map { }.size`.
        std::size_t m = match(k);
        if (m == npos || m == 0 || !at(m - 1).is_identifier()) {
          break;
        }
        operand_begin = m - 1;
      } else {
        break;
      }
      begin = operand_begin;
      if (begin > 0 && at(begin - 1).is("new")) {
        begin -= 1;
      }
      if (begin >= 2 && (at(begin - 1).is(".") || at(begin - 1).is("?."))) {
        k = begin - 2;
        continue;
      }
      break;
    }
    return begin;
  }

  std::string abbreviate(std::size_t b, std::size_t e) const {
    std::string out;
    const Token* prev = nullptr;
    for (std::size_t k = b; k < e && k < size(); ++k) {
      const Token& u = at(k);
      if ((u.is("(") || u.is("{")) && prev != nullptr &&
          (prev->is_identifier() || prev->is(">") || prev->is(")"))) {
        out += u.is("(") ? "()" : "{}";
        k = close_of(k);
        prev = &at(k);
        continue;
      }
      bool word = u.kind != TokenKind::Operator;
      if (prev != nullptr && word && prev->kind != TokenKind::Operator) {
        out += ' ';
      }
      out += u.text;
      prev = &u;
    }
    return out;
  }

  std::optional<std::string> receiver_hint(std::size_t callee) const {
    std::size_t dot = callee;
    if (dot == 0) {
      return std::nullopt;
    }
    --dot;
    if (at(dot).is(">")) {
      // Java explicit type arguments `obj.<T>call()`.
      std::size_t a = match_angle_back(dot);
      if (a == npos || a == 0) {
        return std::nullopt;
      }
      dot = a - 1;
    }
    if (!(at(dot).is(".") || at(dot).is("?."))) {
      return std::nullopt;
    }
    std::size_t begin = receiver_begin(dot);
    if (begin == npos) {
      return std::nullopt;
    }
    return abbreviate(begin, dot);
  }

  std::size_t span_begin_for(std::size_t callee) const {
    std::size_t dot = callee;
    if (dot == 0) {
      return callee;
    }
    --dot;
    if (at(dot).is(">")) {
      std::size_t a = match_angle_back(dot);
      if (a == npos || a == 0) {
        return callee;
      }
      dot = a - 1;
    }
    if (!(at(dot).is(".") || at(dot).is("?."))) {
      return callee;
    }
    std::size_t begin = receiver_begin(dot);
    return begin == npos ? callee : begin;
  }

  void fill_arguments(RawCall& raw) {
    if (raw.args_open == npos) {
      return;
    }
    std::size_t close = raw.args_close;
    std::size_t seg = raw.args_open + 1;
    for (std::size_t k = raw.args_open + 1; k <= close && k <= size(); ++k) {
      if (k < close &&
          (at(k).is("(") || at(k).is("[") || at(k).is("{"))) {
        for (std::size_t d = k; d <= close_of(k) && d < close; ++d) {
          if (d == k || d == close_of(k)) {
            raw.site.arg_tokens.emplace_back(at(d).text);
          } else if (at(k).is("{")) {
            if (d == k + 1) {
              raw.site.arg_tokens.emplace_back("...");
            }
          } else {
            raw.site.arg_tokens.emplace_back(at(d).text);
          }
        }
        k = close_of(k);
        continue;
      }
      if (k == close || at(k).is(",")) {
        if (k > seg) {
          raw.arg_ranges.emplace_back(seg, k);
        }
        seg = k + 1;
        continue;
      }
      raw.site.arg_tokens.emplace_back(at(k).text);
    }
  }

  void on_call(std::size_t callee, int container) {
    RawCall raw;
    raw.container = container;
    raw.callee_tok = callee;
    raw.site.callee_name = std::string(at(callee).text);
    raw.site.receiver_hint = receiver_hint(callee);
    raw.span_begin = span_begin_for(callee);
    std::size_t k = callee + 1;
    if (at(k).is("<")) {
      std::size_t m = match_angle(k);
      if (m != npos) {
        k = m + 1;
      }
    }
    raw.span_end = callee;
    if (at(k).is("(")) {
      raw.args_open = k;
      raw.args_close = close_of(k);
      raw.span_end = std::min(raw.args_close, size() - 1);
      k = raw.args_close + 1;
    }
    if (kotlin() && at(k).is("{") && !blocks_.contains(k) &&
        (raw.args_open == npos || !at(k).starts_line)) {
      raw.lambda_open = k;
      raw.lambda_close = close_of(k);
      raw.span_end = std::min(raw.lambda_close, size() - 1);
    }
    bool upper = std::isupper(static_cast<unsigned char>(at(callee).text[0]));
    raw.ctor_like = kotlin() && upper;
    raw.site.kind = raw.ctor_like ? CallKind::Constructor : CallKind::Method;
    fill_arguments(raw);
    calls_.push_back(std::move(raw));
  }

  void maybe_property(std::size_t name, int container) {
    const Token& t = at(name);
    if (at(name + 1).is("(") || non_call_word(t) || t.is("class")) {
      return;
    }
    if (at(name + 1).is("<")) {
      std::size_t m = match_angle(name + 1);
      if (m != npos && (at(m + 1).is("(") || at(m + 1).is("{"))) {
        return;
      }
    }
    if (kotlin() && at(name + 1).is("{") && !blocks_.contains(name + 1)) {
      return;  // trailing-lambda call, handled as a call
    }
    RawCall raw;
    raw.container = container;
    raw.callee_tok = name;
    raw.site.kind = CallKind::Property;
    raw.site.callee_name = std::string(t.text);
    raw.site.receiver_hint = receiver_hint(name);
    raw.span_begin = span_begin_for(name);
    raw.span_end = name;
    calls_.push_back(std::move(raw));
  }

  std::size_t on_new(std::size_t kw, std::size_t e, int container) {
    std::size_t k = kw + 1;
    std::size_t name = npos;
    std::size_t first = npos;
    while (k < e) {
      if (at(k).is("@")) {
        k = skip_annotation(k);
        continue;
      }
      if (at(k).is_identifier()) {
        if (first == npos) {
          first = k;
        }
        name = k;
        ++k;
        if (at(k).is("<")) {
          std::size_t m = match_angle(k);
          if (m != npos) {
            k = m + 1;
          }
        }
        if (at(k).is(".")) {
          ++k;
          continue;
        }
      }
      break;
    }
    if (name == npos || !at(k).is("(")) {
      // Array creation or malformed.
      return kw;
    }
    RawCall raw;
    raw.container = container;
    raw.callee_tok = kw;
    raw.site.kind = CallKind::Constructor;
    raw.site.callee_name = std::string(at(name).text);
    if (first != name) {
      raw.site.receiver_hint = abbreviate(first, name - 1);
    }
    raw.span_begin = kw;
    raw.args_open = k;
    raw.args_close = close_of(k);
    raw.span_end = std::min(raw.args_close, size() - 1);
    std::size_t after = raw.args_close + 1;
    if (at(after).is("{")) {
      raw.anon_open = after;
      raw.anon_close = close_of(after);
      raw.span_end = std::min(raw.anon_close, size() - 1);
      anon_bodies_[after] = calls_.size();
    }
    fill_arguments(raw);
    calls_.push_back(std::move(raw));
    return k - 1;  // continue scanning at the argument list
  }

  std::size_t on_object_expression(
      std::size_t kw,
      std::size_t e,
      int container) {
    std::size_t k = kw + 1;
    std::size_t super_name = npos;
    std::size_t super_first = npos;
    std::size_t super_args = npos;
    if (at(k).is(":")) {
      ++k;
      // First supertype: a.b.Name<T>(args)?
      while (k < e && at(k).is_identifier()) {
        if (super_first == npos) {
          super_first = k;
        }
        super_name = k;
        ++k;
        if (at(k).is("<")) {
          std::size_t m = match_angle(k);
          if (m != npos) {
            k = m + 1;
          }
        }
        if (at(k).is(".")) {
          ++k;
          continue;
        }
        break;
      }
      if (at(k).is("(")) {
        super_args = k;
      }
      // Remaining supertypes up to the body.
      while (k < e && !at(k).is("{")) {
        if (at(k).is("(")) {
          k = close_of(k);
        }
        ++k;
      }
    }
    if (!at(k).is("{")) {
      return kw;
    }
    RawCall raw;
    raw.container = container;
    raw.callee_tok = kw;
    raw.site.kind = CallKind::Constructor;
    raw.site.callee_name =
        super_name == npos ? "Any" : std::string(at(super_name).text);
    if (super_first != npos && super_first != super_name) {
      raw.site.receiver_hint = abbreviate(super_first, super_name - 1);
    }
    raw.span_begin = kw;
    if (super_args != npos) {
      raw.args_open = super_args;
      raw.args_close = close_of(super_args);
    }
    raw.anon_open = k;
    raw.anon_close = close_of(k);
    raw.span_end = std::min(raw.anon_close, size() - 1);
    anon_bodies_[k] = calls_.size();
    fill_arguments(raw);
    calls_.push_back(std::move(raw));
    if (super_args != npos) {
      scan(super_args + 1, close_of(super_args), container);
    }
    return k - 1;
  }

  // ---------------------------------------------------------------------
  // Variables

  std::string type_text_before(std::size_t name) const {
    // Walk back over a Java type: Ident(.Ident)*(<...>)?([])*
    std::size_t k = name;
    std::size_t begin = npos;
    while (k > 0) {
      --k;
      const Token& u = at(k);
      if (u.is("]")) {
        std::size_t m = match(k);
        if (m == npos || m + 1 != k) {
          return "";
        }
        k = m;
        continue;
      }
      if (u.is(">")) {
        std::size_t a = match_angle_back(k);
        if (a == npos) {
          return "";
        }
        k = a;
        continue;
      }
      if (u.is_identifier() && !kNonTypeWords.contains(u.text)) {
        begin = k;
        if (k >= 2 && at(k - 1).is(".") && at(k - 2).is_identifier()) {
          --k;
          continue;
        }
        break;
      }
      return "";
    }
    return begin == npos ? "" : abbreviate(begin, name);
  }

  void collect_variables() {
    std::size_t first_code = 0;
    while (first_code < size() &&
           (at(first_code).is("package") || at(first_code).is("import"))) {
      first_code = at(first_code).is("package")
          ? skip_qualified_statement(first_code)
          : skip_import_tokens(first_code);
    }
    for (std::size_t k = first_code; k < size(); ++k) {
      const Token& t = at(k);
      if (!t.is_identifier() || kNonTypeWords.contains(t.text)) {
        continue;
      }
      if (kotlin()) {
        bool declared = k > 0 && (at(k - 1).is("val") || at(k - 1).is("var"));
        bool typed_param = at(k + 1).is(":") && k > 0 &&
            (at(k - 1).is("(") || at(k - 1).is(",") || at(k - 1).is("{"));
        if (!declared && !typed_param) {
          continue;
        }
        std::string type;
        if (at(k + 1).is(":")) {
          std::size_t j = k + 2;
          std::size_t end = j;
          while (end < size()) {
            const Token& u = at(end);
            if (u.is(",") || u.is(")") || u.is("=") || u.is("->") ||
                u.is("{") || u.is(";") || u.is("by") ||
                (end > j && u.starts_line)) {
              break;
            }
            if (u.is("<")) {
              std::size_t m = match_angle(end);
              if (m != npos) {
                end = m + 1;
                continue;
              }
            }
            if (u.is("(")) {
              end = close_of(end) + 1;
              continue;
            }
            ++end;
          }
          type = abbreviate(j, end);
        }
        unit_.variables.push_back({std::string(t.text), type, location(k, k)});
        continue;
      }
      const Token& next = at(k + 1);
      if (!(next.is("=") || next.is(";") || next.is(":") || next.is(",") ||
            next.is(")"))) {
        continue;
      }
      if (k == 0) {
        continue;
      }
      const Token& prev = at(k - 1);
      if (!(prev.is_identifier() || prev.is(">") || prev.is("]"))) {
        continue;
      }
      if (prev.is_identifier() && kNonTypeWords.contains(prev.text)) {
        continue;
      }
      std::string type = type_text_before(k);
      if (type.empty()) {
        continue;
      }
      unit_.variables.push_back({std::string(t.text), type, location(k, k)});
    }
  }

  std::size_t skip_import_tokens(std::size_t i) const {
    std::size_t j = i + 1;
    while (j < size() && !at(j).is(";") && !at(j).starts_line) {
      ++j;
    }
    return at(j).is(";") ? j + 1 : j;
  }

  // ---------------------------------------------------------------------
  // Derivation

  static bool contains(std::size_t b, std::size_t e, std::size_t pos) {
    return pos >= b && pos < e;
  }

  bool condition_has_null(const Condition& c) const {
    if (c.null_subject) {
      return true;
    }
    for (std::size_t k = c.begin; k < c.end; ++k) {
      if (at(k).is("null") &&
          ((k > c.begin && is_eq_op(at(k - 1))) ||
           (k + 1 < c.end && is_eq_op(at(k + 1))))) {
        return true;
      }
    }
    return false;
  }

  // Identifier at k is the operand of a null comparison or a null-safe
  // operator.
  bool null_compared(std::size_t k) const {
    if (is_eq_op(at(k + 1)) && at(k + 2).is("null")) {
      return true;
    }
    if (k >= 2 && is_eq_op(at(k - 1)) && at(k - 2).is("null")) {
      return true;
    }
    if (at(k + 1).is("?.") || at(k + 1).is("?:")) {
      return true;
    }
    // `when (x) { null -> ... }`
    if (k >= 2 && at(k - 1).is("(") && at(k - 2).is("when") &&
        at(k + 1).is(")")) {
      for (const auto& c : conditions_) {
        if (c.begin == k && c.null_subject) {
          return true;
        }
      }
    }
    return false;
  }

  bool is_variable_use(std::size_t k, std::string_view name) const {
    return at(k).is_identifier() && at(k).text == name &&
        !(k > 0 && (at(k - 1).is(".") || at(k - 1).is("?.") ||
                    at(k - 1).is("::")));
  }

  // Innermost `{` group strictly containing pos; returns its close index.
  std::size_t enclosing_block_end(std::size_t pos) const {
    std::size_t best = size();
    std::size_t best_open = npos;
    for (const auto& [open, close] : brace_pairs_) {
      if (open < pos && pos < close &&
          (best_open == npos || open > best_open)) {
        best_open = open;
        best = close;
      }
    }
    return best;
  }

  bool in_any_condition(std::size_t pos) const {
    return std::any_of(conditions_.begin(), conditions_.end(),
                       [&](const Condition& c) {
                         return contains(c.begin, c.end, pos);
                       });
  }

  // Kotlin statements end at line breaks, Java ones at `;`.
  bool expression_ends_after(std::size_t last) const {
    std::size_t k = last + 1;
    if (kotlin() && at(k).is("as")) {
      ++k;
      if (at(k).is("?")) {
        ++k;
      }
      while (at(k).is_identifier() || at(k).is(".") || at(k).is("?")) {
        ++k;
      }
      if (at(k).is("<")) {
        std::size_t m = match_angle(k);
        if (m != npos) {
          k = m + 1;
        }
      }
      if (at(k).is("?")) {
        ++k;
      }
    }
    if (k >= size()) {
      return true;
    }
    const Token& t = at(k);
    if (t.is(";") || t.is("}")) {
      return true;
    }
    if (kotlin() && t.starts_line && !t.is(".") && !t.is("?.") &&
        !t.is("?:") && !t.is("&&") && !t.is("||")) {
      return true;
    }
    return false;
  }

  std::optional<std::string> assignment_target(const RawCall& call) const {
    std::size_t end = call.span_end;
    if (call.site.kind == CallKind::Constructor && call.anon_close != npos) {
      end = call.anon_close;
    }
    if (!expression_ends_after(end)) {
      return std::nullopt;
    }
    std::size_t p = call.span_begin;
    if (p == 0) {
      return std::nullopt;
    }
    --p;
    if (at(p).is(")") && !kotlin()) {
      // Java cast `(Type) expr`.
      std::size_t m = match(p);
      if (m == npos || m == 0) {
        return std::nullopt;
      }
      for (std::size_t k = m + 1; k < p; ++k) {
        if (!(at(k).is_identifier() || at(k).is(".") || at(k).is("<") ||
              at(k).is(">") || at(k).is(",") || at(k).is("?"))) {
          return std::nullopt;
        }
      }
      p = m - 1;
    }
    if (!at(p).is("=") || p == 0) {
      return std::nullopt;
    }
    std::size_t name = p - 1;
    if (kotlin()) {
      // `val x: Type = ...`
      for (std::size_t k = p - 1; k > 0 && k + 16 > p; --k) {
        if (at(k).is(":") && at(k - 1).is_identifier() && k >= 2 &&
            (at(k - 2).is("val") || at(k - 2).is("var"))) {
          name = k - 1;
          break;
        }
        if (at(k).is("=") || at(k).is(";") || at(k).is("{") ||
            at(k).starts_line) {
          break;
        }
      }
    }
    if (!at(name).is_identifier()) {
      return std::nullopt;
    }
    return std::string(at(name).text);
  }

  void finish() {
    // Brace pairs for block lookups.
    for (std::size_t k = 0; k < size(); ++k) {
      if (at(k).is("{") && match(k) != npos) {
        brace_pairs_.emplace_back(k, match(k));
      }
    }

    // Stable ids in source order.
    std::vector<std::size_t> order(calls_.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      order[k] = k;
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return calls_[a].callee_tok < calls_[b].callee_tok;
    });
    // Property and call detection can both fire on one token in odd
    // recovery paths; keep the first.
    std::vector<std::size_t> id_of(calls_.size(), npos);
    std::vector<std::size_t> kept;
    for (std::size_t k : order) {
      if (!kept.empty() &&
          calls_[kept.back()].callee_tok == calls_[k].callee_tok) {
        continue;
      }
      id_of[k] = kept.size();
      kept.push_back(k);
    }
    for (std::size_t k = 0; k < calls_.size(); ++k) {
      if (id_of[k] != npos) {
        calls_[k].site.id = static_cast<std::uint32_t>(id_of[k]);
      }
    }

    // Argument classification.
    for (std::size_t k : kept) {
      RawCall& raw = calls_[k];
      for (auto [a, b] : raw.arg_ranges) {
        Argument arg;
        arg.text = abbreviate(a, b);
        if (b == a + 1 && at(a).is("null")) {
          arg.kind = ArgumentKind::Null;
        } else if (b == a + 1 && at(a).is("this")) {
          arg.kind = ArgumentKind::This;
        } else if (b == a + 1 && at(a).is_identifier()) {
          arg.kind = ArgumentKind::Identifier;
        } else if (kotlin() && at(a).is("{") && close_of(a) + 1 == b) {
          arg.kind = ArgumentKind::Lambda;
        } else {
          for (std::size_t d = a; d < b; ++d) {
            if (at(d).is("->") && !kotlin()) {
              arg.kind = ArgumentKind::Lambda;
              break;
            }
            if (at(d).is("(") || at(d).is("[") || at(d).is("{")) {
              d = close_of(d);
            }
          }
          if (arg.kind == ArgumentKind::Other) {
            for (std::size_t c : kept) {
              const RawCall& other = calls_[c];
              std::size_t end = other.span_end;
              if (other.span_begin == a && end + 1 == b &&
                  other.site.kind != CallKind::Property) {
                arg.kind = ArgumentKind::Call;
                arg.call_id = other.site.id;
                break;
              }
            }
          }
        }
        raw.site.arguments.push_back(std::move(arg));
      }
      if (raw.lambda_open != npos) {
        Argument arg;
        arg.kind = ArgumentKind::Lambda;
        arg.text = "{...}";
        raw.site.arguments.push_back(std::move(arg));
      }
    }

    // Owner of a token position: innermost call whose argument list or
    // trailing lambda contains it.
    auto owner_of = [&](std::size_t pos,
                        std::optional<std::size_t> exclude) {
      std::optional<std::size_t> best;
      std::size_t best_begin = 0;
      for (std::size_t c : kept) {
        if (exclude && *exclude == c) {
          continue;
        }
        const RawCall& raw = calls_[c];
        std::size_t b = npos;
        if (raw.args_open != npos && pos > raw.args_open &&
            pos < raw.args_close) {
          b = raw.args_open;
        } else if (raw.lambda_open != npos && pos >= raw.lambda_open &&
                   pos <= raw.lambda_close) {
          b = raw.lambda_open;
        }
        if (b != npos && (!best || b > best_begin)) {
          best = c;
          best_begin = b;
        }
      }
      return best;
    };

    // Callback classification.
    for (auto& body : bodies_) {
      if (body.method_name) {
        const auto& m = *body.method_name;
        if (m == "onResponse") {
          body.kind = CallbackKind::Response;
        } else if (m == "onFailure") {
          body.kind = CallbackKind::Failure;
        } else if (m == "onErrorResponse") {
          body.kind = CallbackKind::ErrorListener;
        }
        if (body.host_call) {
          body.owner_call =
              owner_of(calls_[*body.host_call].span_begin, body.host_call);
        }
        continue;
      }
      if (!body.lambda) {
        continue;
      }
      auto owner = owner_of(body.raw_anchor, std::nullopt);
      if (!owner) {
        continue;
      }
      const RawCall& call = calls_[*owner];
      body.host_call = owner;
      body.owner_call = owner;
      if (call.site.callee_name == "Listener") {
        body.kind = CallbackKind::Response;
        body.owner_call = owner_of(call.span_begin, owner);
        continue;
      }
      if (call.site.callee_name == "ErrorListener") {
        body.kind = CallbackKind::ErrorListener;
        body.owner_call = owner_of(call.span_begin, owner);
        continue;
      }
      bool ctor = call.site.kind == CallKind::Constructor;
      if (!ctor) {
        continue;
      }
      // Volley request constructors take (..., listener, errorListener).
      std::size_t n = call.site.arguments.size();
      std::size_t position = n;
      if (call.lambda_open != npos && body.raw_anchor == call.lambda_open) {
        position = n - 1;
      } else {
        for (std::size_t a = 0; a < call.arg_ranges.size(); ++a) {
          if (contains(call.arg_ranges[a].first, call.arg_ranges[a].second,
                       body.raw_anchor)) {
            position = a;
          }
        }
      }
      if (position >= n) {
        continue;
      }
      bool last = position + 1 == n;
      bool previous_is_lambda = position > 0 &&
          call.site.arguments[position - 1].kind == ArgumentKind::Lambda;
      if (last && (n >= 3 || previous_is_lambda)) {
        body.kind = CallbackKind::ErrorListener;
      } else {
        body.kind = CallbackKind::Response;
      }
    }

    // Regions exported to the unit.
    std::vector<std::optional<std::uint32_t>> region_index(bodies_.size());
    for (std::size_t k = 0; k < bodies_.size(); ++k) {
      Body& body = bodies_[k];
      if (!body.kind) {
        continue;
      }
      CallbackRegion region;
      region.kind = *body.kind;
      region.location = location(body.loc_begin,
                                 std::min(body.loc_end, size() - 1));
      if (body.host_call) {
        region.host_call = calls_[*body.host_call].site.id;
      }
      if (body.owner_call) {
        region.owner_call = calls_[*body.owner_call].site.id;
      }
      region.parameters = body.params;
      if (!body.params.empty()) {
        region.payload = body.params.back();
      } else if (body.lambda && body.implicit_it && kotlin()) {
        region.payload = "it";
      }
      region.has_statements = body.end > body.begin;
      if (region.payload) {
        for (std::size_t t = body.begin; t < body.end; ++t) {
          if (is_variable_use(t, *region.payload)) {
            region.payload_uses.push_back(location(t, t));
            if (null_compared(t)) {
              region.payload_null_checked = true;
            }
          }
        }
      }
      region_index[k] = static_cast<std::uint32_t>(unit_.callbacks.size());
      unit_.callbacks.push_back(std::move(region));
    }

    // Per-call flags.
    std::vector<bool> cond_null(conditions_.size());
    for (std::size_t c = 0; c < conditions_.size(); ++c) {
      cond_null[c] = condition_has_null(conditions_[c]);
    }
    auto inside_boundary_within = [&](std::size_t outer_begin,
                                      std::size_t pos) {
      for (const auto& body : bodies_) {
        if (body.begin > outer_begin && contains(body.begin, body.end, pos)) {
          return true;
        }
      }
      return false;
    };
    std::vector<std::vector<std::size_t>> try_calls(tries_.size());

    for (std::size_t k : kept) {
      RawCall& raw = calls_[k];
      CallSite& site = raw.site;
      std::size_t pos = raw.callee_tok;
      std::size_t loc_begin = raw.callee_tok;
      std::size_t loc_end = raw.args_close != npos
          ? std::min(raw.args_close, size() - 1)
          : raw.callee_tok;
      if (kotlin() && raw.site.kind == CallKind::Constructor &&
          at(raw.callee_tok).is("object")) {
        loc_end = raw.callee_tok;
      }
      site.location = location(loc_begin, loc_end);
      site.assigned_to = assignment_target(raw);

      // Null guard (a).
      for (std::size_t c = 0; c < conditions_.size(); ++c) {
        if (cond_null[c] &&
            contains(conditions_[c].begin, conditions_[c].end, pos)) {
          site.guard_branch = GuardBranch::Direct;
        }
      }
      std::size_t expr_end = raw.span_end;
      if (at(expr_end + 1).is("?.") || at(expr_end + 1).is("?:")) {
        site.guard_branch = GuardBranch::Direct;
      }
      if (in_any_condition(pos)) {
        site.in_decision = true;
      }
      // Null guard (b) and decision via result variable.
      if (site.assigned_to) {
        std::size_t block_end = enclosing_block_end(pos);
        bool first_use = true;
        for (std::size_t t = expr_end + 1; t < block_end; ++t) {
          if (!is_variable_use(t, *site.assigned_to)) {
            continue;
          }
          if (first_use && site.guard_branch == GuardBranch::None &&
              null_compared(t)) {
            site.guard_branch = GuardBranch::ResultVariable;
          }
          first_use = false;
          if (in_any_condition(t)) {
            site.in_decision = true;
          }
        }
      }
      site.guarded_by_null_check = site.guard_branch != GuardBranch::None;

      for (std::size_t tr = 0; tr < tries_.size(); ++tr) {
        const RawTry& t = tries_[tr];
        if (!contains(t.covered_begin, t.covered_end, pos) ||
            inside_boundary_within(t.covered_begin, pos)) {
          continue;
        }
        try_calls[tr].push_back(k);
        if (t.catch_nonempty) {
          site.inside_try_with_nonempty_catch = true;
        }
      }

      std::size_t best_begin = 0;
      for (std::size_t b = 0; b < bodies_.size(); ++b) {
        const Body& body = bodies_[b];
        if (!region_index[b] || !contains(body.begin, body.end, pos)) {
          continue;
        }
        if (!site.callback_index || body.begin >= best_begin) {
          site.inside_callback = body.kind;
          site.callback_index = region_index[b];
          best_begin = body.begin;
        }
      }
    }

    // Distribute.
    unit_.methods = std::move(methods_);
    for (std::size_t k : kept) {
      RawCall& raw = calls_[k];
      CallSite site = raw.site;
      if (raw.container < 0 ||
          raw.container >= static_cast<int>(unit_.methods.size())) {
        unit_.top_level_calls.push_back(std::move(site));
        continue;
      }
      auto& method = unit_.methods[raw.container];
      if (site.kind == CallKind::Constructor) {
        method.constructor_calls.push_back(std::move(site));
      } else {
        method.calls.push_back(std::move(site));
      }
    }
    for (std::size_t tr = 0; tr < tries_.size(); ++tr) {
      const RawTry& t = tries_[tr];
      TryBlock block;
      block.location = location(t.keyword, t.last);
      block.catch_nonempty = t.catch_nonempty;
      for (std::size_t k : try_calls[tr]) {
        block.call_locations_covered.push_back(calls_[k].site.location);
      }
      if (t.container < 0 ||
          t.container >= static_cast<int>(unit_.methods.size())) {
        unit_.top_level_try_blocks.push_back(std::move(block));
      } else {
        unit_.methods[t.container].try_blocks.push_back(std::move(block));
      }
    }
  }

  std::string path_;
  Language language_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> match_;
  Token sentinel_;
  SourceUnit unit_;
  int recognized_ = 0;

  std::vector<MethodModel> methods_;
  std::vector<RawCall> calls_;
  std::vector<Body> bodies_;
  std::vector<Condition> conditions_;
  std::vector<RawTry> tries_;
  std::unordered_set<std::size_t> blocks_;
  std::map<std::size_t, std::size_t> anon_bodies_;
  std::vector<std::pair<std::size_t, std::size_t>> brace_pairs_;
};

} // namespace

std::string_view to_string(Language language) {
  return language == Language::Java ? "Java" : "Kotlin";
}

std::string_view to_string(CallbackKind kind) {
  switch (kind) {
    case CallbackKind::Response:
      return "Response";
    case CallbackKind::Failure:
      return "Failure";
    case CallbackKind::ErrorListener:
      return "ErrorListener";
  }
  return "";
}

std::optional<Language> language_for_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
        path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".java")) {
    return Language::Java;
  }
  if (ends_with(".kt")) {
    return Language::Kotlin;
  }
  return std::nullopt;
}

SourceUnit parse_source_unit(
    std::string path,
    std::string_view text,
    Language language) {
  return Parser(std::move(path), text, language).run();
}

std::vector<const CallSite*> SourceUnit::all_calls() const {
  std::vector<const CallSite*> out;
  for (const auto& m : methods) {
    for (const auto& c : m.calls) {
      out.push_back(&c);
    }
    for (const auto& c : m.constructor_calls) {
      out.push_back(&c);
    }
  }
  for (const auto& c : top_level_calls) {
    out.push_back(&c);
  }
  std::sort(out.begin(), out.end(),
            [](auto* a, auto* b) { return a->id < b->id; });
  return out;
}

const CallSite* SourceUnit::find_call(std::uint32_t id) const {
  for (const auto& m : methods) {
    for (const auto& c : m.calls) {
      if (c.id == id) {
        return &c;
      }
    }
    for (const auto& c : m.constructor_calls) {
      if (c.id == id) {
        return &c;
      }
    }
  }
  for (const auto& c : top_level_calls) {
    if (c.id == id) {
      return &c;
    }
  }
  return nullptr;
}

bool call_matches_name(const CallSite& call, std::string_view name) {
  if (call.callee_name == name) {
    return true;
  }
  if (call.kind != CallKind::Property || call.callee_name.empty() ||
      name.size() < 4 || name.substr(0, 3) != "get") {
    return false;
  }
  std::string getter = "get" + call.callee_name;
  getter[3] = static_cast<char>(std::toupper(getter[3]));
  return getter == name;
}

} // namespace conan
