#include "support.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "conan/project.h"
#include "json.hpp"

namespace conan::testing {

namespace fs = std::filesystem;

fs::path fixtures_dir() {
  return fs::path(CONAN_FIXTURES_DIR);
}

TempDir::TempDir() {
  std::random_device rd;
  std::mt19937_64 rng(rd());
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate =
        fs::temp_directory_path() / ("conan-test-" + std::to_string(rng()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Finding> analyze(const fs::path& root, const RuleConfig& config) {
  ProjectModel project = load_project(discover_project(root, std::nullopt, config.include_tests));
  return evaluate(project, config);
}

std::string analyze_to_json(const fs::path& root) {
  ProjectModel project = load_project(discover_project(root));
  std::vector<Finding> findings = evaluate(project);
  return to_json(make_report(root.filename().string(), std::move(findings), project.diagnostics));
}

FindingKey key_of(const Finding& finding) {
  std::vector<std::pair<std::string, int>> locations;
  for (const auto& l : finding.locations) {
    locations.emplace_back(l.path, l.line);
  }
  return {std::string(to_string(finding.rule)), locations};
}

std::vector<FindingKey> keys_of(const std::vector<Finding>& findings) {
  std::vector<FindingKey> out;
  for (const auto& f : findings) {
    out.push_back(key_of(f));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FindingKey> load_golden(const fs::path& fixture) {
  nlohmann::json doc = nlohmann::json::parse(read_text(fixture / "expected.json"));
  std::vector<FindingKey> out;
  for (const auto& f : doc.at("findings")) {
    std::vector<std::pair<std::string, int>> locations;
    for (const auto& l : f.at("locations")) {
      locations.emplace_back(l.at("path").get<std::string>(), l.at("line").get<int>());
    }
    out.emplace_back(f.at("rule").get<std::string>(), locations);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_rule(const std::vector<Finding>& findings, RuleId rule) {
  return std::count_if(
      findings.begin(), findings.end(), [rule](const Finding& f) { return f.rule == rule; });
}

std::string complete_manifest() {
  return R"(<?xml version="1.0" encoding="utf-8"?>
<manifest xmlns:android="http://schemas.android.com/apk/res/android"
    package="com.example.app">
    <uses-permission android:name="android.permission.INTERNET" />
    <uses-permission android:name="android.permission.ACCESS_NETWORK_STATE" />
    <application>
        <activity android:name=".DataUsageActivity">
            <intent-filter>
                <action android:name="android.intent.action.MANAGE_NETWORK_USAGE" />
            </intent-filter>
        </activity>
    </application>
</manifest>
)";
}

} // namespace conan::testing
