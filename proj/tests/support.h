#pragma once

#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

#include "conan/report.h"
#include "conan/rules.h"

namespace conan::testing {

std::filesystem::path fixtures_dir();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const {
    return path_;
  }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Discovers, loads and evaluates the project at `root` with defaults.
std::vector<Finding> analyze(const std::filesystem::path& root, const RuleConfig& config = {});

// Full JSON report for `root`, display name set to the root's basename.
std::string analyze_to_json(const std::filesystem::path& root);

// Rule plus (path, line) of each location: the shape golden files record.
using FindingKey = std::tuple<std::string, std::vector<std::pair<std::string, int>>>;

FindingKey key_of(const Finding& finding);
std::vector<FindingKey> keys_of(const std::vector<Finding>& findings);

// Reads expected.json; findings are returned sorted.
std::vector<FindingKey> load_golden(const std::filesystem::path& fixture);

std::size_t count_rule(const std::vector<Finding>& findings, RuleId rule);

// Minimal manifest declaring both network permissions and a data usage
// screen, so it triggers no manifest rule.
std::string complete_manifest();

} // namespace conan::testing
