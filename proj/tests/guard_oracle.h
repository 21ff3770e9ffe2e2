#pragma once

#include <map>
#include <random>
#include <string>

namespace conan::testing {

// A Java file holding one method `G.m` whose body is random. Every call
// under test is named `probe<N>` with N counting up from 0.
struct GeneratedBody {
  std::string source;
  int probes = 0;
  int statements = 0;
};

GeneratedBody generate_body(std::mt19937& rng, int max_statements);

struct OracleVerdict {
  bool guarded = false;
  bool covered = false;

  bool operator==(const OracleVerdict&) const = default;
};

// Line-based reading of a generated body, independent of the real parser.
// Relies on the generator's layout: one statement or block header per line,
// closing braces leading their line. Keyed by probe number.
std::map<int, OracleVerdict> walk_oracle(const std::string& source);

} // namespace conan::testing
