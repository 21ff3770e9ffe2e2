#pragma once

#include <stdexcept>
#include <string>

namespace conan {

// Base class for every error the analyzer raises on purpose. Anything else
// escaping the pipeline is a bug.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRootError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NoManifestFound : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class AmbiguousModule : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class ManifestParseError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class FatalParseError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class TruthFormatError : public AnalysisError {
 public:
  TruthFormatError(std::size_t line, const std::string& what)
      : AnalysisError("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const {
    return line_;
  }

 private:
  std::size_t line_;
};

} // namespace conan
