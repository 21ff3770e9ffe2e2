#include "conan/project.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "conan/call_graph.h"
#include "conan/errors.h"

namespace conan {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kManifestName = "AndroidManifest.xml";

bool excluded_directory(const fs::path& dir) {
  std::string name = dir.filename().string();
  return name == "build" || name == "generated" ||
      (!name.empty() && name[0] == '.');
}

bool test_directory(const fs::path& dir) {
  std::string name = dir.filename().string();
  return name == "test" || name == "androidTest";
}

bool is_directory_no_follow(const fs::path& p) {
  std::error_code ec;
  return fs::symlink_status(p, ec).type() == fs::file_type::directory;
}

// Recursive walk that never follows symlinks and prunes excluded
// directories. Calls `on_file` for every regular file.
template <typename OnFile>
void walk(const fs::path& dir, bool skip_tests, OnFile&& on_file) {
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) {
    return;
  }
  std::vector<fs::directory_entry> entries;
  for (; it != fs::directory_iterator(); it.increment(ec)) {
    if (ec) {
      break;
    }
    entries.push_back(*it);
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& entry : entries) {
    auto status = entry.symlink_status(ec);
    if (ec) {
      continue;
    }
    if (status.type() == fs::file_type::directory) {
      if (excluded_directory(entry.path()) ||
          (skip_tests && test_directory(entry.path()))) {
        continue;
      }
      walk(entry.path(), skip_tests, on_file);
    } else if (status.type() == fs::file_type::regular) {
      on_file(entry.path());
    }
  }
}

std::vector<fs::path> find_manifests(const fs::path& dir) {
  std::vector<fs::path> out;
  walk(dir, true, [&](const fs::path& p) {
    if (p.filename() == kManifestName) {
      out.push_back(p);
    }
  });
  return out;
}

// Module directory owning a manifest: `X` for `X/src/<set>/Manifest`, else
// the manifest's own directory.
fs::path module_of_manifest(const fs::path& manifest) {
  fs::path set_dir = manifest.parent_path();
  fs::path src_dir = set_dir.parent_path();
  if (src_dir.filename() == "src") {
    return src_dir.parent_path();
  }
  return set_dir;
}

fs::path pick_manifest(const fs::path& module_dir) {
  fs::path conventional = module_dir / "src" / "main" / kManifestName;
  std::error_code ec;
  if (fs::symlink_status(conventional, ec).type() == fs::file_type::regular) {
    return conventional;
  }
  auto manifests = find_manifests(module_dir);
  if (manifests.empty()) {
    throw NoManifestFound(
        "no " + std::string(kManifestName) + " under module '" +
        module_dir.filename().string() + "'");
  }
  // Shallowest first, then byte-wise.
  std::sort(
      manifests.begin(),
      manifests.end(),
      [](const fs::path& a, const fs::path& b) {
        auto da = std::distance(a.begin(), a.end());
        auto db = std::distance(b.begin(), b.end());
        if (da != db) {
          return da < db;
        }
        return a.generic_string() < b.generic_string();
      });
  return manifests.front();
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    return std::nullopt;
  }
  return buffer.str();
}

std::string initializer_owner(const SourceUnit& unit) {
  if (!unit.types_declared.empty()) {
    return unit.types_declared.front();
  }
  std::string stem = fs::path(unit.path).stem().string();
  return unit.language == Language::Kotlin ? stem + "Kt" : stem;
}

} // namespace

std::string relative_path(const fs::path& root, const fs::path& path) {
  return path.lexically_relative(root).generic_string();
}

ProjectLayout discover_project(
    const fs::path& root,
    const std::optional<std::string>& module_override,
    bool include_tests) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw InvalidRootError("not a directory: " + root.string());
  }
  ProjectLayout layout;
  layout.root_path = fs::weakly_canonical(fs::absolute(root), ec);
  if (ec) {
    layout.root_path = fs::absolute(root).lexically_normal();
  }
  const fs::path& base = layout.root_path;

  fs::path module_dir;
  if (module_override) {
    module_dir = (base / *module_override).lexically_normal();
    if (!relative_path(base, module_dir).starts_with("..") &&
        is_directory_no_follow(module_dir)) {
      layout.manifest_path = pick_manifest(module_dir);
    } else {
      throw NoManifestFound("module directory not found: " + *module_override);
    }
  } else if (is_directory_no_follow(base / "app")) {
    module_dir = base / "app";
    layout.manifest_path = pick_manifest(module_dir);
  } else {
    std::vector<fs::path> modules;
    for (const auto& manifest : find_manifests(base)) {
      fs::path module = module_of_manifest(manifest);
      if (std::find(modules.begin(), modules.end(), module) == modules.end()) {
        modules.push_back(module);
      }
    }
    if (modules.empty()) {
      throw NoManifestFound(
          "no " + std::string(kManifestName) + " under " + root.string());
    }
    if (modules.size() > 1) {
      std::string names;
      for (const auto& m : modules) {
        names += (names.empty() ? "" : ", ") + relative_path(base, m);
      }
      throw AmbiguousModule(
          "several modules declare a manifest (" + names +
          "); choose one with --module");
    }
    module_dir = modules.front();
    layout.manifest_path = pick_manifest(module_dir);
  }
  layout.module_name = module_dir == base ? "." : relative_path(base, module_dir);

  std::vector<fs::path> roots;
  for (const char* lang : {"java", "kotlin"}) {
    fs::path r = module_dir / "src" / "main" / lang;
    if (is_directory_no_follow(r)) {
      roots.push_back(r);
    }
  }
  if (roots.empty()) {
    roots.push_back(layout.manifest_path.parent_path());
  }
  if (include_tests) {
    for (const char* set : {"test", "androidTest"}) {
      for (const char* lang : {"java", "kotlin"}) {
        fs::path r = module_dir / "src" / set / lang;
        if (is_directory_no_follow(r)) {
          roots.push_back(r);
        }
      }
    }
  }

  std::vector<std::pair<std::string, fs::path>> found;
  for (const auto& r : roots) {
    walk(r, !include_tests, [&](const fs::path& p) {
      if (language_for_path(p.filename().string())) {
        found.emplace_back(relative_path(base, p), p);
      }
    });
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  for (auto& [rel, path] : found) {
    layout.source_paths.push_back(std::move(path));
  }
  return layout;
}

ProjectModel load_project(const ProjectLayout& layout) {
  ProjectModel project;
  project.layout = layout;
  project.manifest_rel_path = relative_path(layout.root_path, layout.manifest_path);

  auto manifest_text = read_file(layout.manifest_path);
  if (!manifest_text) {
    throw ManifestParseError("cannot read " + project.manifest_rel_path);
  }
  project.manifest = parse_manifest(*manifest_text);

  const auto& paths = layout.source_paths;
  std::vector<std::optional<SourceUnit>> parsed(paths.size());
  std::vector<std::string> failures(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      std::string rel = relative_path(layout.root_path, paths[i]);
      auto text = read_file(paths[i]);
      if (!text) {
        failures[i] = rel + ": unreadable file";
        continue;
      }
      try {
        parsed[i] = parse_source_unit(
            rel, *text, *language_for_path(paths[i].filename().string()));
      } catch (const FatalParseError& e) {
        failures[i] = rel + ": " + e.what();
      }
    }
  };
  unsigned n_threads = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(paths.size())));
  std::vector<std::jthread> threads;
  for (unsigned t = 1; t < n_threads; ++t) {
    threads.emplace_back(worker);
  }
  worker();
  threads.clear();

  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (parsed[i]) {
      for (const auto& d : parsed[i]->diagnostics) {
        project.diagnostics.push_back(parsed[i]->path + ":" + d);
      }
      project.units.push_back(std::move(*parsed[i]));
    } else {
      project.diagnostics.push_back(failures[i]);
    }
  }
  std::sort(
      project.units.begin(),
      project.units.end(),
      [](const SourceUnit& a, const SourceUnit& b) { return a.path < b.path; });

  for (const auto& unit : project.units) {
    if (unit.top_level_calls.empty()) {
      continue;
    }
    MethodModel init;
    init.name = "<init>";
    init.qualified_name = initializer_owner(unit) + ".<init>";
    init.location = unit.top_level_calls.front().location;
    init.location.end_line = init.location.line;
    init.location.end_column = init.location.column;
    for (const auto& call : unit.top_level_calls) {
      (call.kind == CallKind::Constructor ? init.constructor_calls : init.calls)
          .push_back(call);
    }
    init.try_blocks = unit.top_level_try_blocks;
    project.initializers.push_back(std::move(init));
  }
  link_project(project);
  return project;
}

} // namespace conan
