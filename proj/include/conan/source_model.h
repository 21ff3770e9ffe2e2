#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace conan {

enum class Language { Java, Kotlin };

std::string_view to_string(Language language);

struct SourceLocation {
  std::string path;
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  auto operator<=>(const SourceLocation&) const = default;
};

enum class CallKind : std::uint8_t {
  Method,
  Constructor,
  // `.name` member access without an argument list. Kotlin reaches Java
  // getters this way (`conn.responseCode`), so name matching treats a
  // property `foo` as equivalent to a call of `getFoo`.
  Property,
};

enum class CallbackKind : std::uint8_t { Response, Failure, ErrorListener };

std::string_view to_string(CallbackKind kind);

// Which rule established a null guard.
enum class GuardBranch : std::uint8_t {
  None,
  // Call sits inside an if/while/when/ternary condition that compares
  // against null, or is immediately followed by `?.` / `?:`.
  Direct,
  // Call result is assigned to a variable whose first later use in the same
  // block is a null comparison.
  ResultVariable,
};

enum class ArgumentKind : std::uint8_t {
  Other,
  Identifier,
  Null,
  This,
  // The argument is exactly one call or instantiation; see call_id.
  Call,
  Lambda,
};

struct Argument {
  ArgumentKind kind = ArgumentKind::Other;
  // Abbreviated source text (nested argument lists elided).
  std::string text;
  std::optional<std::uint32_t> call_id;

  bool operator==(const Argument&) const = default;
};

struct CallSite {
  // Unique within the owning SourceUnit, increasing in source order.
  std::uint32_t id = 0;
  CallKind kind = CallKind::Method;
  std::string callee_name;
  std::optional<std::string> receiver_hint;
  std::vector<std::string> arg_tokens;
  std::vector<Argument> arguments;
  SourceLocation location;

  bool guarded_by_null_check = false;
  GuardBranch guard_branch = GuardBranch::None;
  // Inside any if/while/switch/when/ternary condition, or assigned to a
  // variable that is later read inside one in the same block.
  bool in_decision = false;
  bool inside_try_with_nonempty_catch = false;
  std::optional<CallbackKind> inside_callback;
  // Index into SourceUnit::callbacks of the innermost classified callback.
  std::optional<std::uint32_t> callback_index;
  // Variable receiving the value of this call expression, when the call is
  // the entire right-hand side of an assignment or declaration.
  std::optional<std::string> assigned_to;

  bool operator==(const CallSite&) const = default;
};

// A callback body passed to (or declared on an object passed to) a call:
// either one method of an anonymous object or a lambda.
struct CallbackRegion {
  CallbackKind kind = CallbackKind::Response;
  SourceLocation location;
  // The instantiation that creates the callback object (anonymous class,
  // Kotlin `object :` or SAM constructor); for bare lambdas this is the call
  // receiving the lambda.
  std::optional<std::uint32_t> host_call;
  // Innermost call whose argument list contains the host expression.
  std::optional<std::uint32_t> owner_call;
  std::vector<std::string> parameters;
  // Name of the response payload parameter (first parameter, `it` for
  // Kotlin lambdas without explicit parameters).
  std::optional<std::string> payload;
  std::vector<SourceLocation> payload_uses;
  bool payload_null_checked = false;
  bool has_statements = false;

  bool operator==(const CallbackRegion&) const = default;
};

struct TryBlock {
  SourceLocation location;
  bool catch_nonempty = false;
  std::vector<SourceLocation> call_locations_covered;

  bool operator==(const TryBlock&) const = default;
};

struct VariableDecl {
  std::string name;
  std::string type_text;
  SourceLocation location;

  bool operator==(const VariableDecl&) const = default;
};

struct MethodModel {
  // Dotted enclosing type path plus the method name. Kotlin top-level
  // functions live in the `<FileStem>Kt` facade.
  std::string qualified_name;
  std::string name;
  SourceLocation location;
  std::vector<CallSite> calls;
  std::vector<CallSite> constructor_calls;
  std::vector<TryBlock> try_blocks;
  std::set<std::string> callees_internal;

  bool operator==(const MethodModel&) const = default;
};

struct SourceUnit {
  std::string path;
  Language language = Language::Java;
  std::set<std::string> imports;
  // Source location of each import keyword, keyed by imported name.
  std::vector<std::pair<std::string, SourceLocation>> import_locations;
  std::vector<std::string> types_declared;
  std::vector<MethodModel> methods;
  // Field initializers, initializer blocks and Kotlin top-level code.
  std::vector<CallSite> top_level_calls;
  std::vector<TryBlock> top_level_try_blocks;
  std::vector<CallbackRegion> callbacks;
  std::vector<VariableDecl> variables;
  std::vector<std::string> diagnostics;

  bool operator==(const SourceUnit&) const = default;

  // Every call site of the unit, ordered by id.
  std::vector<const CallSite*> all_calls() const;
  const CallSite* find_call(std::uint32_t id) const;
};

std::optional<Language> language_for_path(std::string_view path);

/// Parses one Java or Kotlin file. Localized syntax errors are skipped and
/// reported in SourceUnit::diagnostics. Throws FatalParseError when nothing
/// recognizable remains (binary content, prose).
SourceUnit parse_source_unit(
    std::string path,
    std::string_view text,
    Language language);

/// Name equality used by every rule: exact match, or a property access
/// `foo`/`isFoo` standing for the getter `getFoo`.
bool call_matches_name(const CallSite& call, std::string_view name);

} // namespace conan
