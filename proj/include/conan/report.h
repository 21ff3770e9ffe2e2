#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conan/rules.h"

namespace conan {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

struct RuleCount {
  RuleId rule = RuleId::INP;
  Category category = Category::CNP;
  std::size_t count = 0;

  bool operator==(const RuleCount&) const = default;
};

struct Report {
  std::string tool_version{kToolVersion};
  // Display name of the project root, never an absolute path.
  std::string project_root;
  // Rules with at least one finding, in rule order.
  std::vector<RuleCount> rule_summary;
  std::vector<Finding> findings;
  std::vector<std::string> diagnostics;

  bool operator==(const Report&) const = default;
};

Report make_report(
    std::string project_root,
    std::vector<Finding> findings,
    std::vector<std::string> diagnostics);

std::string to_json(const Report& report);

/// Inverse of to_json. Throws std::runtime_error on malformed input.
Report report_from_json(std::string_view json_text);

// Full text of a root-relative path, or nullopt when unavailable.
using SourceProvider =
    std::function<std::optional<std::string>(const std::string& path)>;

SourceProvider filesystem_source_provider(std::filesystem::path root);

/// Self-contained HTML page: one section per rule, each finding with a
/// snippet of three lines around every location.
std::string to_html(const Report& report, const SourceProvider& sources);

/// One line per finding: `path:line:column: RULE message`.
std::string summary_line(const Finding& finding);

} // namespace conan
