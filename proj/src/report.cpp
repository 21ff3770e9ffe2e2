#include "conan/report.h"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace conan {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kSnippetRadius = 3;

ordered_json location_to_json(const SourceLocation& l) {
  return ordered_json{
      {"path", l.path},
      {"line", l.line},
      {"column", l.column},
      {"end_line", l.end_line},
      {"end_column", l.end_column},
  };
}

SourceLocation location_from_json(const ordered_json& j) {
  SourceLocation l;
  l.path = j.at("path").get<std::string>();
  l.line = j.at("line").get<int>();
  l.column = j.at("column").get<int>();
  l.end_line = j.at("end_line").get<int>();
  l.end_column = j.at("end_column").get<int>();
  return l;
}

template <typename T, typename F>
T parse_enum(const ordered_json& j, F&& from_string, std::string_view what) {
  auto value = from_string(j.get<std::string>());
  if (!value) {
    throw std::runtime_error(
        "unknown " + std::string(what) + ": " + j.get<std::string>());
  }
  return *value;
}

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&#39;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string location_label(const SourceLocation& l) {
  return l.path + ":" + std::to_string(l.line) + ":" + std::to_string(l.column);
}

constexpr std::string_view kStyle = R"(
body { font-family: sans-serif; margin: 2em; color: #222; }
h1 { font-size: 1.5em; }
section.rule { border-top: 1px solid #ccc; margin-top: 1.5em; }
.category { font-size: 0.8em; background: #eee; padding: 0.1em 0.4em; }
.finding { margin: 1em 0 1em 1em; }
.location { font-family: monospace; color: #555; }
pre.snippet { background: #f7f7f7; padding: 0.5em; overflow-x: auto; }
pre.snippet .hit { background: #ffe08a; display: block; }
.lineno { color: #999; user-select: none; }
)";

} // namespace

Report make_report(
    std::string project_root,
    std::vector<Finding> findings,
    std::vector<std::string> diagnostics) {
  Report report;
  report.project_root = std::move(project_root);
  normalize_findings(findings);
  std::map<RuleId, std::size_t> counts;
  for (const auto& f : findings) {
    ++counts[f.rule];
  }
  for (const auto& [rule, count] : counts) {
    report.rule_summary.push_back({rule, category_of(rule), count});
  }
  report.findings = std::move(findings);
  report.diagnostics = std::move(diagnostics);
  return report;
}

std::string to_json(const Report& report) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = report.tool_version;
  doc["project"] = report.project_root;
  ordered_json summary = ordered_json::array();
  for (const auto& s : report.rule_summary) {
    summary.push_back(ordered_json{
        {"rule", to_string(s.rule)},
        {"category", to_string(s.category)},
        {"count", s.count},
    });
  }
  doc["summary"] = std::move(summary);
  ordered_json findings = ordered_json::array();
  for (const auto& f : report.findings) {
    ordered_json jf;
    jf["rule"] = to_string(f.rule);
    jf["category"] = to_string(f.category);
    jf["severity"] = to_string(f.severity);
    jf["message"] = f.message;
    if (f.library) {
      jf["library"] = to_string(*f.library);
    }
    ordered_json locations = ordered_json::array();
    for (const auto& l : f.locations) {
      locations.push_back(location_to_json(l));
    }
    jf["locations"] = std::move(locations);
    findings.push_back(std::move(jf));
  }
  doc["findings"] = std::move(findings);
  doc["diagnostics"] = report.diagnostics;
  return doc.dump(2) + "\n";
}

Report report_from_json(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("invalid report JSON: ") + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw std::runtime_error("unsupported schema_version");
    }
    Report report;
    report.tool_version = doc.at("tool_version").get<std::string>();
    report.project_root = doc.at("project").get<std::string>();
    for (const auto& s : doc.at("summary")) {
      RuleCount rc;
      rc.rule = parse_enum<RuleId>(s.at("rule"), rule_from_string, "rule");
      rc.category =
          parse_enum<Category>(s.at("category"), category_from_string, "category");
      rc.count = s.at("count").get<std::size_t>();
      report.rule_summary.push_back(rc);
    }
    for (const auto& jf : doc.at("findings")) {
      Finding f;
      f.rule = parse_enum<RuleId>(jf.at("rule"), rule_from_string, "rule");
      f.category =
          parse_enum<Category>(jf.at("category"), category_from_string, "category");
      if (jf.at("severity").get<std::string>() != to_string(Severity::Warning)) {
        throw std::runtime_error("unknown severity");
      }
      f.message = jf.at("message").get<std::string>();
      if (jf.contains("library")) {
        f.library =
            parse_enum<LibraryId>(jf.at("library"), library_from_string, "library");
      }
      for (const auto& l : jf.at("locations")) {
        f.locations.push_back(location_from_json(l));
      }
      report.findings.push_back(std::move(f));
    }
    report.diagnostics = doc.at("diagnostics").get<std::vector<std::string>>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

SourceProvider filesystem_source_provider(std::filesystem::path root) {
  return [root = std::move(root)](const std::string& path)
             -> std::optional<std::string> {
    std::ifstream in(root / path, std::ios::binary);
    if (!in) {
      return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
}

std::string to_html(const Report& report, const SourceProvider& sources) {
  std::map<std::string, std::optional<std::vector<std::string>>> cache;
  auto lines_of = [&](const std::string& path)
      -> const std::optional<std::vector<std::string>>& {
    auto it = cache.find(path);
    if (it == cache.end()) {
      std::optional<std::vector<std::string>> lines;
      if (sources) {
        if (auto text = sources(path)) {
          lines = split_lines(*text);
        }
      }
      it = cache.emplace(path, std::move(lines)).first;
    }
    return it->second;
  };

  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>Connectivity issues: " << escape_html(report.project_root)
      << "</title>\n<style>" << kStyle << "</style>\n</head>\n<body>\n";
  out << "<h1>Connectivity issues in " << escape_html(report.project_root)
      << "</h1>\n";
  out << "<p class=\"total\">" << report.findings.size()
      << (report.findings.size() == 1 ? " issue" : " issues")
      << " found.</p>\n";

  std::size_t i = 0;
  while (i < report.findings.size()) {
    RuleId rule = report.findings[i].rule;
    out << "<section class=\"rule\" id=\"rule-" << to_string(rule) << "\">\n"
        << "<h2>" << to_string(rule) << " <span class=\"category\">"
        << to_string(category_of(rule)) << "</span></h2>\n"
        << "<p>" << escape_html(describe(rule)) << "</p>\n";
    for (; i < report.findings.size() && report.findings[i].rule == rule; ++i) {
      const Finding& f = report.findings[i];
      out << "<div class=\"finding\" data-rule=\"" << to_string(f.rule)
          << "\">\n<p class=\"message\">" << escape_html(f.message) << "</p>\n";
      for (const auto& l : f.locations) {
        out << "<p class=\"location\">" << escape_html(location_label(l))
            << "</p>\n";
        const auto& lines = lines_of(l.path);
        if (!lines || l.line < 1 ||
            l.line > static_cast<int>(lines->size())) {
          continue;
        }
        int first = std::max(1, l.line - kSnippetRadius);
        int last = std::min(static_cast<int>(lines->size()), l.line + kSnippetRadius);
        out << "<pre class=\"snippet\">";
        for (int n = first; n <= last; ++n) {
          bool hit = n == l.line;
          out << (hit ? "<span class=\"hit\">" : "<span>")
              << "<span class=\"lineno\">" << n << "</span> "
              << escape_html((*lines)[n - 1]) << "</span>";
          if (!hit) {
            out << "\n";
          }
        }
        out << "</pre>\n";
      }
      out << "</div>\n";
    }
    out << "</section>\n";
  }

  if (!report.diagnostics.empty()) {
    out << "<section class=\"diagnostics\">\n<h2>Diagnostics</h2>\n<ul>\n";
    for (const auto& d : report.diagnostics) {
      out << "<li>" << escape_html(d) << "</li>\n";
    }
    out << "</ul>\n</section>\n";
  }
  out << "</body>\n</html>\n";
  return out.str();
}

std::string summary_line(const Finding& finding) {
  const SourceLocation& l = finding.locations.front();
  std::string line = location_label(l) + ": " + std::string(to_string(finding.rule)) +
      " " + finding.message;
  if (finding.locations.size() > 1) {
    line += " (+" + std::to_string(finding.locations.size() - 1) + " more)";
  }
  return line;
}

} // namespace conan
