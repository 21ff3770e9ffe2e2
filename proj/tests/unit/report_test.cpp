#include <gtest/gtest.h>

#include "conan/report.h"
#include "json.hpp"

namespace conan {
namespace {

Finding finding(RuleId rule, std::string path, int line, std::string message) {
  Finding f;
  f.rule = rule;
  f.category = category_of(rule);
  f.message = std::move(message);
  f.locations.push_back({std::move(path), line, 5, line, 12});
  return f;
}

Report sample() {
  Finding ok = finding(RuleId::OK, "B.java", 2, "two clients");
  ok.locations.push_back({"A.java", 9, 1, 9, 3});
  ok.library = LibraryId::OkHttp;
  return make_report(
      "demo",
      {finding(RuleId::SYN, "A.java", 4, "sync <call> & more"), ok,
       finding(RuleId::SYN, "A.java", 2, "sync")},
      {"X.java: skipped"});
}

TEST(Report, MakeReportNormalizesAndSummarizes) {
  Report r = sample();
  ASSERT_EQ(r.findings.size(), 3u);
  EXPECT_EQ(r.findings[0].locations[0].line, 2);
  EXPECT_EQ(r.findings[2].rule, RuleId::OK);
  EXPECT_EQ(r.findings[2].locations[0].path, "A.java");
  ASSERT_EQ(r.rule_summary.size(), 2u);
  EXPECT_EQ(r.rule_summary[0], (RuleCount{RuleId::SYN, Category::TS, 2}));
  EXPECT_EQ(r.rule_summary[1], (RuleCount{RuleId::OK, Category::LBS, 1}));
}

TEST(Report, JsonSchemaAndRoundTrip) {
  Report r = sample();
  std::string text = to_json(r);
  auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) {
    keys.push_back(k);
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "tool_version", "project", "summary",
                                            "findings", "diagnostics"}));
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["findings"][2]["library"], "OkHttp");
  EXPECT_FALSE(doc["findings"][0].contains("library"));
  EXPECT_EQ(doc["findings"][0]["locations"][0]["column"], 5);
  EXPECT_EQ(report_from_json(text), r);
  EXPECT_EQ(to_json(report_from_json(text)), text);
}

TEST(Report, MalformedJsonIsRejected) {
  EXPECT_THROW(report_from_json("{"), std::runtime_error);
  EXPECT_THROW(report_from_json(R"({"schema_version": 2})"), std::runtime_error);
  std::string bad_rule = to_json(sample());
  bad_rule.replace(bad_rule.find("\"SYN\""), 5, "\"ZZZ\"");
  EXPECT_THROW(report_from_json(bad_rule), std::runtime_error);
}

TEST(Report, HtmlSectionsSnippetsAndEscaping) {
  std::string a;
  for (int i = 1; i <= 12; ++i) {
    a += "line" + std::to_string(i) + (i == 4 ? " <b>&" : "") + "\n";
  }
  SourceProvider sources = [&](const std::string& path) -> std::optional<std::string> {
    if (path == "A.java") {
      return a;
    }
    return std::nullopt;
  };
  std::string html = to_html(sample(), sources);
  EXPECT_NE(html.find("<section class=\"rule\" id=\"rule-SYN\">"), std::string::npos);
  EXPECT_NE(html.find("<section class=\"rule\" id=\"rule-OK\">"), std::string::npos);
  EXPECT_NE(html.find("data-rule=\"OK\""), std::string::npos);
  EXPECT_NE(html.find("3 issues found."), std::string::npos);
  EXPECT_NE(html.find("sync &lt;call&gt; &amp; more"), std::string::npos);
  EXPECT_NE(html.find("<span class=\"hit\"><span class=\"lineno\">4</span> line4 &lt;b&gt;&amp;"),
            std::string::npos);
  // Radius 3: the hit on A.java:9 shows lines 6..12 and nothing past the end.
  EXPECT_NE(html.find("<span><span class=\"lineno\">6</span> line6</span>\n"), std::string::npos);
  EXPECT_NE(html.find("<span class=\"lineno\">12</span> line12</span>\n</pre>"),
            std::string::npos);
  EXPECT_EQ(html.find("<span class=\"lineno\">13</span>"), std::string::npos);
  // B.java is unavailable: location shown, no snippet.
  EXPECT_NE(html.find("B.java:2:5"), std::string::npos);
  EXPECT_NE(html.find("X.java: skipped"), std::string::npos);
}

TEST(Report, EmptyReportHtml) {
  std::string html = to_html(make_report("demo", {}, {}), nullptr);
  EXPECT_NE(html.find("0 issues found."), std::string::npos);
  EXPECT_EQ(html.find("<section"), std::string::npos);
}

TEST(Report, SummaryLine) {
  Report r = sample();
  EXPECT_EQ(summary_line(r.findings[0]), "A.java:2:5: SYN sync");
  EXPECT_EQ(summary_line(r.findings[2]), "A.java:9:1: OK two clients (+1 more)");
}

} // namespace
} // namespace conan
