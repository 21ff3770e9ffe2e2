// Scores a JSON report against line-delimited ground truth labels.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "conan/errors.h"
#include "conan/evalkit.h"
#include "conan/report.h"

int main(int argc, char** argv) {
  std::string report_path;
  std::string truth_path;
  CLI::App app{"Precision and recall of a report against labeled findings."};
  app.add_option("--report", report_path, "conan-report.json")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--truth", truth_path, "Ground truth JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(report_path);
    std::ostringstream text;
    text << in.rdbuf();
    conan::Report report = conan::report_from_json(text.str());
    auto truth = conan::load_ground_truth(truth_path);
    std::cout << conan::format_score(conan::score(report.findings, truth));
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
