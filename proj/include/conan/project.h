#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conan/manifest.h"
#include "conan/source_model.h"

namespace conan {

struct ProjectLayout {
  std::filesystem::path root_path;
  // Module directory relative to the root, forward slashes; "." when the
  // root itself is the module.
  std::string module_name;
  std::filesystem::path manifest_path;
  // Sorted by their root-relative form, byte-wise.
  std::vector<std::filesystem::path> source_paths;

  bool operator==(const ProjectLayout&) const = default;
};

struct ProjectModel {
  ProjectLayout layout;
  ManifestModel manifest;
  // Root-relative manifest path, forward slashes.
  std::string manifest_rel_path;
  // Ordered by path.
  std::vector<SourceUnit> units;
  // Field initializers and top-level code of each unit, wrapped as methods
  // named `<Type>.<init>` so scope queries can treat them uniformly.
  std::vector<MethodModel> initializers;
  std::vector<std::string> diagnostics;
};

/// Locates the main module and its sources. The module is
/// `module_override` when given, else `app` when that directory exists, else
/// the only directory holding an AndroidManifest.xml.
///
/// Throws InvalidRootError, NoManifestFound or AmbiguousModule.
ProjectLayout discover_project(
    const std::filesystem::path& root,
    const std::optional<std::string>& module_override = std::nullopt,
    bool include_tests = false);

/// Parses the manifest and every source file (in parallel). Unreadable or
/// unparseable sources become diagnostics. Throws ManifestParseError.
ProjectModel load_project(const ProjectLayout& layout);

/// `path` relative to `root` with forward slashes.
std::string relative_path(
    const std::filesystem::path& root,
    const std::filesystem::path& path);

} // namespace conan
