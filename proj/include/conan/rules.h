#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "conan/project.h"
#include "conan/triggers.h"

namespace conan {

// Declaration order is the report order.
enum class RuleId {
  INP,
  ACP,
  NP,
  NM,
  TP,
  TM,
  IP,
  IM,
  AMN,
  RI,
  RB,
  RC,
  OF,
  SYN,
  WM,
  OK,
};

enum class Category { CNP, CSC, NMG, RH, TS, LBS };

enum class Level { Project, Method, CallSite, File };

enum class Severity { Warning };

const std::vector<RuleId>& all_rules();
std::string_view to_string(RuleId rule);
std::optional<RuleId> rule_from_string(std::string_view name);
std::string_view to_string(Category category);
std::optional<Category> category_from_string(std::string_view name);
std::string_view to_string(Level level);
std::string_view to_string(Severity severity);
Category category_of(RuleId rule);
Level level_of(RuleId rule);
// One-sentence description used as the rule's section text in reports.
std::string_view describe(RuleId rule);

struct Finding {
  RuleId rule = RuleId::INP;
  Category category = Category::CNP;
  Severity severity = Severity::Warning;
  std::string message;
  // Sorted and non-empty.
  std::vector<SourceLocation> locations;
  std::optional<LibraryId> library;

  bool operator==(const Finding&) const = default;
};

struct RuleConfig {
  std::set<RuleId> enabled_rules{all_rules().begin(), all_rules().end()};
  int interprocedural_depth = 3;
  bool include_tests = false;
};

std::vector<Finding> detect_cnp(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers);
std::vector<Finding> detect_csc(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers,
    const RuleConfig& config);
std::vector<Finding> detect_nmg(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers);
std::vector<Finding> detect_rh(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers);
std::vector<Finding> detect_ts(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers);
std::vector<Finding> detect_lbs(const ProjectModel& project);

/// Runs every enabled detector, then sorts by (rule, locations) and
/// collapses findings with equal rule and location set.
std::vector<Finding> evaluate(
    const ProjectModel& project,
    const RuleConfig& config = {});

/// Sorts locations inside each finding, then the findings, and drops
/// duplicates.
void normalize_findings(std::vector<Finding>& findings);

} // namespace conan
