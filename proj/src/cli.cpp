#include "conan/cli.h"

#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "conan/errors.h"
#include "conan/project.h"
#include "conan/report.h"
#include "conan/rules.h"

namespace conan {

namespace fs = std::filesystem;

namespace {

struct CliOptions {
  std::string root;
  std::optional<std::string> module;
  std::string out_dir = "./conan-out";
  std::string format = "both";
  std::vector<std::string> enable;
  std::vector<std::string> disable;
  int depth = 3;
  bool include_tests = false;
  bool fail_on_findings = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::set<RuleId> parse_rule_list(const std::vector<std::string>& names) {
  std::set<RuleId> out;
  for (const auto& name : names) {
    auto id = rule_from_string(name);
    if (!id) {
      throw UsageError("unknown rule id: " + name);
    }
    out.insert(*id);
  }
  return out;
}

RuleConfig make_config(const CliOptions& opts) {
  RuleConfig config;
  config.interprocedural_depth = opts.depth;
  config.include_tests = opts.include_tests;
  std::set<RuleId> enable = parse_rule_list(opts.enable);
  std::set<RuleId> disable = parse_rule_list(opts.disable);
  for (RuleId r : enable) {
    if (disable.contains(r)) {
      throw UsageError(
          "rule " + std::string(to_string(r)) + " is both enabled and disabled");
    }
  }
  if (!enable.empty()) {
    config.enabled_rules = enable;
  }
  for (RuleId r : disable) {
    config.enabled_rules.erase(r);
  }
  return config;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    throw AnalysisError("cannot write " + path.string());
  }
}

std::string display_name(const fs::path& root) {
  std::string name = root.filename().string();
  return name.empty() ? "." : name;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliOptions opts;
  CLI::App app{"Detects Internet connectivity issues in Android projects."};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.add_option("--root", opts.root, "Project root directory")->required();
  app.add_option("--module", opts.module, "Main module directory (default: app)");
  app.add_option("--out", opts.out_dir, "Report output directory");
  app.add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"json", "html", "both"}));
  app.add_option("--enable", opts.enable, "Only run these rule ids")->delimiter(',');
  app.add_option("--disable", opts.disable, "Skip these rule ids")->delimiter(',');
  app.add_option("--depth", opts.depth, "Interprocedural depth for method checks")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--include-tests", opts.include_tests, "Analyze test sources too");
  app.add_flag(
      "--fail-on-findings", opts.fail_on_findings, "Exit with 1 when issues are found");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  RuleConfig config;
  try {
    config = make_config(opts);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::error_code ec;
  if (!fs::is_directory(opts.root, ec)) {
    err << "error: --root is not a directory: " << opts.root << "\n";
    return kExitUsage;
  }

  try {
    ProjectLayout layout =
        discover_project(opts.root, opts.module, opts.include_tests);
    ProjectModel project = load_project(layout);
    std::vector<Finding> findings = evaluate(project, config);
    Report report = make_report(
        display_name(layout.root_path), std::move(findings), project.diagnostics);

    for (const auto& d : report.diagnostics) {
      err << "warning: " << d << "\n";
    }
    for (const auto& f : report.findings) {
      out << summary_line(f) << "\n";
    }

    fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir, ec);
    if (ec) {
      throw AnalysisError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    if (opts.format != "html") {
      write_file(out_dir / "conan-report.json", to_json(report));
    }
    if (opts.format != "json") {
      write_file(
          out_dir / "conan-report.html",
          to_html(report, filesystem_source_provider(layout.root_path)));
    }
    return opts.fail_on_findings && !report.findings.empty() ? kExitFindings
                                                             : kExitOk;
  } catch (const std::exception& e) {
    err << "fatal: " << e.what() << "\n";
    return kExitFatal;
  }
}

} // namespace conan
