#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "conan/project.h"

namespace conan {

using ArgFilter = std::function<bool(const std::vector<std::string>&)>;

// Name index over every method and initializer of a project. Holds pointers
// into the project, which must outlive it and stay unmodified.
class CallGraph {
 public:
  explicit CallGraph(const ProjectModel& project);

  /// `method` plus project methods reachable over callees_internal within
  /// `depth` hops. Each method appears once; ordered by location.
  std::vector<const MethodModel*> resolve_scope(
      const MethodModel& method,
      int depth) const;

  const std::vector<const MethodModel*>& methods_named(
      const std::string& qualified_name) const;

 private:
  std::map<std::string, std::vector<const MethodModel*>> by_name_;
};

std::vector<const MethodModel*> resolve_scope(
    const ProjectModel& project,
    const MethodModel& method,
    int depth);

/// Calls and instantiations in `scope` whose name matches one of `names`
/// (see call_matches_name) and whose argument tokens pass `arg_filter`.
/// Ordered by location.
std::vector<const CallSite*> find_calls(
    const std::vector<const MethodModel*>& scope,
    const std::set<std::string>& names,
    const ArgFilter& arg_filter = nullptr);

/// Fills callees_internal of every method and initializer by simple-name
/// match against the methods the project declares.
void link_project(ProjectModel& project);

} // namespace conan
