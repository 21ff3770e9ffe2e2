#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "conan/rules.h"

namespace conan {

enum class Verdict { TP, FP, Present };

struct LabeledFinding {
  RuleId rule = RuleId::INP;
  std::string path;
  int line = 0;
  Verdict verdict = Verdict::TP;

  bool operator==(const LabeledFinding&) const = default;
};

struct RuleScore {
  std::size_t emitted = 0;
  std::size_t matched_tp = 0;
  // Emitted findings labeled FP or not labeled at all.
  std::size_t false_positives = 0;
  // Labels expecting a finding (TP or Present), and how many were found.
  std::size_t expected = 0;
  std::size_t recalled = 0;
  // TP / emitted; nullopt when nothing was emitted.
  std::optional<double> precision;
  // recalled / expected; nullopt when nothing was expected.
  std::optional<double> recall;

  bool operator==(const RuleScore&) const = default;
};

struct PrecisionReport {
  // Only rules with emitted findings or labels.
  std::vector<std::pair<RuleId, RuleScore>> per_rule;
  RuleScore totals;

  const RuleScore* find(RuleId rule) const;
};

/// Reads line-delimited JSON records {rule, path, line, verdict}; blank
/// lines are skipped. Throws TruthFormatError with the 1-based line.
std::vector<LabeledFinding> parse_ground_truth(std::istream& in);
std::vector<LabeledFinding> load_ground_truth(const std::filesystem::path& path);

/// A finding matches a label on rule, path and line of any of its
/// locations. Unlabeled findings count as false positives.
PrecisionReport score(
    const std::vector<Finding>& findings,
    const std::vector<LabeledFinding>& truth);

std::string format_score(const PrecisionReport& report);

} // namespace conan
