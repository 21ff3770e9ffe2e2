#include "conan/evalkit.h"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "conan/errors.h"
#include "json.hpp"

namespace conan {

namespace {

std::optional<Verdict> verdict_from_string(std::string_view s) {
  if (s == "TP") {
    return Verdict::TP;
  }
  if (s == "FP") {
    return Verdict::FP;
  }
  if (s == "present") {
    return Verdict::Present;
  }
  return std::nullopt;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) {
    return std::nullopt;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

void finish(RuleScore& s) {
  s.precision = ratio(s.matched_tp, s.emitted);
  s.recall = ratio(s.recalled, s.expected);
}

bool covers(const Finding& f, const LabeledFinding& label) {
  if (f.rule != label.rule) {
    return false;
  }
  for (const auto& l : f.locations) {
    if (l.path == label.path && l.line == label.line) {
      return true;
    }
  }
  return false;
}

std::string format_ratio(const std::optional<double>& r) {
  if (!r) {
    return "null";
  }
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << *r;
  return out.str();
}

} // namespace

const RuleScore* PrecisionReport::find(RuleId rule) const {
  for (const auto& [r, s] : per_rule) {
    if (r == rule) {
      return &s;
    }
  }
  return nullptr;
}

std::vector<LabeledFinding> parse_ground_truth(std::istream& in) {
  std::vector<LabeledFinding> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw TruthFormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      LabeledFinding label;
      std::string rule = j.at("rule").get<std::string>();
      auto id = rule_from_string(rule);
      if (!id) {
        throw TruthFormatError(line_no, "unknown rule id '" + rule + "'");
      }
      label.rule = *id;
      label.path = j.at("path").get<std::string>();
      label.line = j.at("line").get<int>();
      std::string verdict = j.value("verdict", std::string("present"));
      auto v = verdict_from_string(verdict);
      if (!v) {
        throw TruthFormatError(line_no, "unknown verdict '" + verdict + "'");
      }
      label.verdict = *v;
      if (label.line < 1) {
        throw TruthFormatError(line_no, "line must be positive");
      }
      out.push_back(std::move(label));
    } catch (const nlohmann::json::exception& e) {
      throw TruthFormatError(line_no, std::string("bad record: ") + e.what());
    }
  }
  return out;
}

std::vector<LabeledFinding> load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw TruthFormatError(0, "cannot open " + path.string());
  }
  return parse_ground_truth(in);
}

PrecisionReport score(
    const std::vector<Finding>& findings,
    const std::vector<LabeledFinding>& truth) {
  std::map<RuleId, RuleScore> cells;
  for (const auto& f : findings) {
    RuleScore& s = cells[f.rule];
    ++s.emitted;
    bool tp = false;
    for (const auto& label : truth) {
      if (label.verdict != Verdict::FP && covers(f, label)) {
        tp = true;
        break;
      }
    }
    ++(tp ? s.matched_tp : s.false_positives);
  }
  for (const auto& label : truth) {
    if (label.verdict == Verdict::FP) {
      cells[label.rule];
      continue;
    }
    RuleScore& s = cells[label.rule];
    ++s.expected;
    for (const auto& f : findings) {
      if (covers(f, label)) {
        ++s.recalled;
        break;
      }
    }
  }
  PrecisionReport report;
  for (auto& [rule, s] : cells) {
    finish(s);
    report.totals.emitted += s.emitted;
    report.totals.matched_tp += s.matched_tp;
    report.totals.false_positives += s.false_positives;
    report.totals.expected += s.expected;
    report.totals.recalled += s.recalled;
    report.per_rule.emplace_back(rule, s);
  }
  finish(report.totals);
  return report;
}

std::string format_score(const PrecisionReport& report) {
  std::ostringstream out;
  out << "rule  emitted  tp  fp  precision  recall\n";
  auto row = [&](std::string_view name, const RuleScore& s) {
    out << std::left << std::setw(6) << name << std::setw(9) << s.emitted
        << std::setw(4) << s.matched_tp << std::setw(4) << s.false_positives
        << std::setw(11) << format_ratio(s.precision) << format_ratio(s.recall)
        << "\n";
  };
  for (const auto& [rule, s] : report.per_rule) {
    row(to_string(rule), s);
  }
  row("total", report.totals);
  return out.str();
}

} // namespace conan
