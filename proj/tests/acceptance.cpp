// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "conan/cli.h"
#include "conan/evalkit.h"
#include "conan/project.h"
#include "conan/report.h"
#include "conan/rules.h"
#include "conan/source_model.h"
#include "guard_oracle.h"
#include "support.h"

namespace fs = std::filesystem;
using namespace conan;
using namespace conan::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) {
      detail.clear();
    }
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
};

std::vector<fs::path> subdirs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string rules_list(const std::vector<Finding>& findings) {
  std::string out;
  for (const auto& f : findings) {
    out += (out.empty() ? "" : ",") + std::string(to_string(f.rule));
  }
  return out.empty() ? "none" : out;
}

Outcome rule_coverage_matrix() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  std::set<std::string> seen;
  for (const auto& dir : subdirs(fixtures_dir() / "rules")) {
    std::string name = dir.filename().string();
    auto sep = name.find('_');
    auto rule = rule_from_string(name.substr(0, sep));
    std::string polarity = name.substr(sep + 1);
    if (!rule || (polarity != "pos" && polarity != "neg")) {
      o.fail("unexpected fixture " + name);
      continue;
    }
    seen.insert(name);
    std::vector<Finding> findings = analyze(dir);
    std::size_t target = count_rule(findings, *rule);
    if (polarity == "neg" && target != 0) {
      o.fail(name + " reports " + std::to_string(target) + " target findings");
    }
    if (polarity == "pos" && target == 0) {
      o.fail(name + " misses its target rule");
    }
    if (keys_of(findings) != load_golden(dir)) {
      o.fail(name + " differs from golden (got " + rules_list(findings) + ")");
    }
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (RuleId r : all_rules()) {
    for (const char* p : {"_pos", "_neg"}) {
      if (!seen.contains(std::string(to_string(r)) + p)) {
        o.fail(std::string("missing fixture ") + std::string(to_string(r)) + p);
      }
    }
  }
  if (seconds >= 30.0) {
    o.fail("suite took " + std::to_string(seconds) + " s");
  }
  if (o.pass) {
    std::ostringstream d;
    d << seen.size() << " fixtures match goldens in " << seconds << " s";
    o.detail = d.str();
  }
  return o;
}

Outcome composite_connection_checks() {
  Outcome o;
  const fs::path base = fixtures_dir() / "composite";
  struct Expect {
    const char* fixture;
    std::map<RuleId, std::size_t> counts;
  };
  const std::vector<Expect> cases = {
      {"no_checks",
       {{RuleId::NP, 1}, {RuleId::TP, 1}, {RuleId::IP, 1}, {RuleId::NM, 0}, {RuleId::TM, 0},
        {RuleId::IM, 0}, {RuleId::SYN, 1}, {RuleId::OF, 1}}},
      {"checks_elsewhere",
       {{RuleId::NP, 0}, {RuleId::TP, 0}, {RuleId::IP, 0}, {RuleId::NM, 1}, {RuleId::TM, 1},
        {RuleId::IM, 1}, {RuleId::SYN, 1}, {RuleId::OF, 1}}},
      {"guarded_try",
       {{RuleId::NP, 1}, {RuleId::TP, 1}, {RuleId::IP, 1}, {RuleId::NM, 0}, {RuleId::TM, 0},
        {RuleId::IM, 0}, {RuleId::SYN, 1}, {RuleId::OF, 0}}},
  };
  for (const auto& c : cases) {
    std::vector<Finding> findings = analyze(base / c.fixture);
    for (const auto& [rule, want] : c.counts) {
      std::size_t got = count_rule(findings, rule);
      if (got != want) {
        o.fail(std::string(c.fixture) + ": " + std::string(to_string(rule)) + " " +
               std::to_string(got) + " != " + std::to_string(want));
      }
    }
  }
  // Project-level and method-level variants never coexist anywhere.
  const std::vector<std::pair<RuleId, RuleId>> exclusive = {
      {RuleId::NP, RuleId::NM}, {RuleId::TP, RuleId::TM}, {RuleId::IP, RuleId::IM}};
  for (const auto& group : {"rules", "composite", "parity"}) {
    for (const auto& dir : subdirs(fixtures_dir() / group)) {
      std::vector<fs::path> roots = {dir};
      if (std::string(group) == "parity") {
        roots = {dir / "java", dir / "kotlin"};
      }
      for (const auto& root : roots) {
        std::vector<Finding> findings = analyze(root);
        for (const auto& [p, m] : exclusive) {
          if (count_rule(findings, p) > 0 && count_rule(findings, m) > 0) {
            o.fail(root.string() + " reports both " + std::string(to_string(p)) + " and " +
                   std::string(to_string(m)));
          }
        }
      }
    }
  }
  if (o.pass) {
    o.detail = "no checks: NP/TP/IP+SYN+OF; checks elsewhere: NM/TM/IM+SYN+OF; in try: no OF";
  }
  return o;
}

// N synchronous triggers alternating OkHttp execute and openConnection, plus
// one asynchronous enqueue that must not count.
std::string sync_trigger_source(int n) {
  std::string s =
      "package com.example.app;\n\n"
      "import java.net.URL;\n"
      "import okhttp3.OkHttpClient;\n"
      "import okhttp3.Request;\n\n"
      "public class Bulk {\n"
      "  OkHttpClient client;\n\n"
      "  void run(Request request, URL url, okhttp3.Callback callback) throws Exception {\n"
      "    client.newCall(request).enqueue(callback);\n";
  for (int i = 0; i < n; ++i) {
    s += i % 2 == 0 ? "    client.newCall(request).execute();\n" : "    url.openConnection();\n";
  }
  s += "  }\n}\n";
  return s;
}

Outcome syn_count_property() {
  Outcome o;
  for (int n = 0; n <= 20; ++n) {
    TempDir tmp;
    write_text(tmp.path() / "app/src/main/AndroidManifest.xml", complete_manifest());
    write_text(
        tmp.path() / "app/src/main/java/com/example/app/Bulk.java", sync_trigger_source(n));
    std::size_t got = count_rule(analyze(tmp.path()), RuleId::SYN);
    if (got != static_cast<std::size_t>(n)) {
      o.fail("N=" + std::to_string(n) + " gave " + std::to_string(got));
    }
  }
  if (o.pass) {
    o.detail = "N SYN findings for N = 0..20";
  }
  return o;
}

Outcome ok_dependency_exclusion() {
  Outcome o;
  TempDir tmp;
  fs::copy(fixtures_dir() / "deps/vendored", tmp.path(), fs::copy_options::recursive);
  std::size_t before = count_rule(analyze(tmp.path()), RuleId::OK);
  if (before != 0) {
    o.fail("vendored layout gave " + std::to_string(before) + " OK findings");
  }
  fs::rename(
      tmp.path() / "app/build/generated/source/com/example/app/Images.java",
      tmp.path() / "app/src/main/java/com/example/app/Images.java");
  std::vector<Finding> after = analyze(tmp.path());
  std::size_t ok = count_rule(after, RuleId::OK);
  if (ok != 1) {
    o.fail("after move: " + std::to_string(ok) + " OK findings");
  } else {
    for (const auto& f : after) {
      if (f.rule == RuleId::OK && f.locations.size() != 2) {
        o.fail("after move: " + std::to_string(f.locations.size()) + " locations");
      }
    }
  }
  if (o.pass) {
    o.detail = "build/ and sibling-module clients ignored; in-app pair gives 1 finding, 2 locations";
  }
  return o;
}

using ParityKey = std::tuple<std::string, std::string, std::string, std::string, std::vector<int>>;

std::vector<ParityKey> parity_keys(const std::vector<Finding>& findings) {
  std::vector<ParityKey> out;
  for (const auto& f : findings) {
    std::vector<int> lines;
    for (const auto& l : f.locations) {
      lines.push_back(l.line);
    }
    out.emplace_back(
        std::string(to_string(f.rule)), std::string(to_string(f.category)),
        f.library ? std::string(to_string(*f.library)) : "", f.message, lines);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome java_kotlin_parity() {
  Outcome o;
  std::size_t pairs = 0;
  for (const char* rule : {"SYN", "OF", "RB", "NM", "OK"}) {
    fs::path dir = fixtures_dir() / "parity" / rule;
    std::vector<Finding> java = analyze(dir / "java");
    std::vector<Finding> kotlin = analyze(dir / "kotlin");
    if (count_rule(java, *rule_from_string(rule)) == 0) {
      o.fail(std::string(rule) + " pair does not exercise its rule");
    }
    if (parity_keys(java) != parity_keys(kotlin)) {
      o.fail(std::string(rule) + " pair differs: java " + rules_list(java) + " kotlin " +
             rules_list(kotlin));
    }
    ++pairs;
  }
  if (o.pass) {
    o.detail = std::to_string(pairs) + " pairs agree on rule, category, library, message, lines";
  }
  return o;
}

std::vector<fs::path> all_fixture_roots() {
  std::vector<fs::path> out;
  for (const auto& group : {"rules", "composite", "decoy", "deps"}) {
    for (const auto& dir : subdirs(fixtures_dir() / group)) {
      out.push_back(dir);
    }
  }
  for (const auto& dir : subdirs(fixtures_dir() / "parity")) {
    out.push_back(dir / "java");
    out.push_back(dir / "kotlin");
  }
  return out;
}

Outcome determinism() {
  Outcome o;
  std::mt19937 rng(7);
  std::size_t roots = 0;
  for (const auto& root : all_fixture_roots()) {
    ++roots;
    std::string first = analyze_to_json(root);
    if (analyze_to_json(root) != first) {
      o.fail(root.string() + ": repeated runs differ");
    }
    ProjectLayout layout = discover_project(root);
    for (int round = 0; round < 3; ++round) {
      std::shuffle(layout.source_paths.begin(), layout.source_paths.end(), rng);
      ProjectModel project = load_project(layout);
      std::string shuffled = to_json(
          make_report(root.filename().string(), evaluate(project), project.diagnostics));
      if (shuffled != first) {
        o.fail(root.string() + ": shuffled input order changes output");
        break;
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(roots) + " fixtures byte-identical across reruns and 3 shuffles";
  }
  return o;
}

Outcome guard_oracle_equivalence() {
  Outcome o;
  std::mt19937 rng(20240611);
  constexpr int kCases = 500;
  std::size_t probes = 0;
  std::size_t agree = 0;
  std::size_t guarded = 0;
  std::size_t covered = 0;
  for (int c = 0; c < kCases; ++c) {
    GeneratedBody body = generate_body(rng, 30);
    if (body.statements > 30) {
      o.fail("case " + std::to_string(c) + " has " + std::to_string(body.statements) +
             " statements");
    }
    std::map<int, OracleVerdict> oracle = walk_oracle(body.source);
    SourceUnit unit = parse_source_unit("gen/G.java", body.source, Language::Java);
    std::map<int, OracleVerdict> parsed;
    for (const auto& m : unit.methods) {
      for (const auto& call : m.calls) {
        if (call.callee_name.rfind("probe", 0) == 0) {
          parsed[std::stoi(call.callee_name.substr(5))] = {
              call.guarded_by_null_check, call.inside_try_with_nonempty_catch};
        }
      }
    }
    if (static_cast<int>(oracle.size()) != body.probes ||
        static_cast<int>(parsed.size()) != body.probes || !unit.diagnostics.empty()) {
      o.fail("case " + std::to_string(c) + ": probe inventory mismatch");
      continue;
    }
    for (const auto& [id, want] : oracle) {
      ++probes;
      guarded += want.guarded;
      covered += want.covered;
      if (parsed[id] == want) {
        ++agree;
      } else if (o.detail.size() < 400) {
        o.fail("case " + std::to_string(c) + " probe" + std::to_string(id) + " oracle g=" +
               std::to_string(want.guarded) + ",t=" + std::to_string(want.covered) +
               " parser g=" + std::to_string(parsed[id].guarded) +
               ",t=" + std::to_string(parsed[id].covered));
      } else {
        o.pass = false;
      }
    }
  }
  if (guarded == 0 || covered == 0 || guarded == probes || covered == probes) {
    o.fail("generator lacks variety");
  }
  std::ostringstream d;
  d << agree << "/" << probes << " probes agree over " << kCases << " bodies (" << guarded
    << " guarded, " << covered << " in try)";
  if (o.pass) {
    o.detail = d.str();
  } else {
    o.detail = d.str() + "; " + o.detail;
  }
  return o;
}

Outcome evalkit_arithmetic() {
  Outcome o;
  std::vector<Finding> corpus;
  for (const auto& dir : subdirs(fixtures_dir() / "rules")) {
    for (Finding f : analyze(dir)) {
      for (auto& l : f.locations) {
        l.path = dir.filename().string() + "/" + l.path;
      }
      corpus.push_back(std::move(f));
    }
  }
  PrecisionReport full =
      score(corpus, load_ground_truth(fixtures_dir() / "rules" / "truth.jsonl"));
  for (RuleId r : all_rules()) {
    const RuleScore* s = full.find(r);
    if (!s || !s->precision || *s->precision != 1.0) {
      o.fail(std::string(to_string(r)) + " precision is not 1.0");
    }
  }

  // 1 true RB finding plus 3 decoys labeled FP: 1 / 4.
  constexpr double kExpectedRb = 1.0 / 4.0;
  PrecisionReport decoy = score(
      analyze(fixtures_dir() / "decoy" / "RB_decoy"),
      load_ground_truth(fixtures_dir() / "decoy" / "RB_decoy.truth.jsonl"));
  const RuleScore* rb = decoy.find(RuleId::RB);
  if (!rb || !rb->precision || *rb->precision != kExpectedRb) {
    o.fail("RB decoy precision " + (rb && rb->precision ? std::to_string(*rb->precision) : "null"));
  }
  if (o.pass) {
    o.detail = "corpus precision 1.0 for all 16 rules; RB with 3 decoys 0.25";
  }
  return o;
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"conan"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome cli_exit_codes() {
  Outcome o;
  TempDir tmp;
  std::string out_dir = (tmp.path() / "out").string();
  struct Case {
    const char* name;
    std::vector<std::string> args;
    int expected;
  };
  const std::vector<Case> cases = {
      {"clean", {"--root", (fixtures_dir() / "rules/ACP_neg").string(), "--fail-on-findings"},
       kExitOk},
      {"finding", {"--root", (fixtures_dir() / "rules/SYN_pos").string(), "--fail-on-findings"},
       kExitFindings},
      {"usage", {"--root", "/nonexistent/conan-project"}, kExitUsage},
      {"fatal", {"--root", (fixtures_dir() / "cli/bad_manifest").string()}, kExitFatal},
  };
  std::string detail;
  for (auto c : cases) {
    c.args.insert(c.args.end(), {"--out", out_dir});
    int code = cli(c.args);
    detail += (detail.empty() ? "" : ", ") + std::string(c.name) + "=" + std::to_string(code);
    if (code != c.expected) {
      o.fail(std::string(c.name) + " exited " + std::to_string(code) + ", expected " +
             std::to_string(c.expected));
    }
  }
  if (o.pass) {
    o.detail = detail;
  }
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"rule-coverage-matrix", rule_coverage_matrix},
      {"composite-connection-checks", composite_connection_checks},
      {"syn-count-property", syn_count_property},
      {"ok-dependency-exclusion", ok_dependency_exclusion},
      {"java-kotlin-parity", java_kotlin_parity},
      {"determinism", determinism},
      {"guard-oracle-equivalence", guard_oracle_equivalence},
      {"evalkit-arithmetic", evalkit_arithmetic},
      {"cli-exit-codes", cli_exit_codes},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    failures += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << index << " " << name << ": "
              << outcome.detail << "\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
