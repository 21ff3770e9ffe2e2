#include "conan/call_graph.h"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace conan {

namespace {

bool location_less(const MethodModel* a, const MethodModel* b) {
  if (a->location != b->location) {
    return a->location < b->location;
  }
  return a->qualified_name < b->qualified_name;
}

template <typename F>
void for_each_method(ProjectModel& project, F&& f) {
  for (auto& unit : project.units) {
    for (auto& m : unit.methods) {
      f(m);
    }
  }
  for (auto& m : project.initializers) {
    f(m);
  }
}

std::string getter_for(const std::string& property) {
  if (property.empty() || property.starts_with("is")) {
    return {};
  }
  std::string g = "get" + property;
  g[3] = static_cast<char>(std::toupper(static_cast<unsigned char>(g[3])));
  return g;
}

} // namespace

CallGraph::CallGraph(const ProjectModel& project) {
  for (const auto& unit : project.units) {
    for (const auto& m : unit.methods) {
      by_name_[m.qualified_name].push_back(&m);
    }
  }
  for (const auto& m : project.initializers) {
    by_name_[m.qualified_name].push_back(&m);
  }
}

const std::vector<const MethodModel*>& CallGraph::methods_named(
    const std::string& qualified_name) const {
  static const std::vector<const MethodModel*> kNone;
  auto it = by_name_.find(qualified_name);
  return it == by_name_.end() ? kNone : it->second;
}

std::vector<const MethodModel*> CallGraph::resolve_scope(
    const MethodModel& method,
    int depth) const {
  std::vector<const MethodModel*> out{&method};
  std::set<std::string> seen{method.qualified_name};
  std::deque<std::pair<const MethodModel*, int>> queue{{&method, 0}};
  while (!queue.empty()) {
    auto [m, d] = queue.front();
    queue.pop_front();
    if (d >= depth) {
      continue;
    }
    for (const auto& callee : m->callees_internal) {
      if (!seen.insert(callee).second) {
        continue;
      }
      for (const MethodModel* target : methods_named(callee)) {
        out.push_back(target);
        queue.emplace_back(target, d + 1);
      }
    }
  }
  std::sort(out.begin(), out.end(), location_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<const MethodModel*> resolve_scope(
    const ProjectModel& project,
    const MethodModel& method,
    int depth) {
  return CallGraph(project).resolve_scope(method, depth);
}

std::vector<const CallSite*> find_calls(
    const std::vector<const MethodModel*>& scope,
    const std::set<std::string>& names,
    const ArgFilter& arg_filter) {
  std::vector<const CallSite*> out;
  auto consider = [&](const CallSite& call) {
    bool named = std::any_of(names.begin(), names.end(), [&](const auto& n) {
      return call_matches_name(call, n);
    });
    if (named && (!arg_filter || arg_filter(call.arg_tokens))) {
      out.push_back(&call);
    }
  };
  for (const MethodModel* m : scope) {
    for (const auto& c : m->calls) {
      consider(c);
    }
    for (const auto& c : m->constructor_calls) {
      consider(c);
    }
  }
  std::sort(out.begin(), out.end(), [](const CallSite* a, const CallSite* b) {
    return a->location < b->location;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void link_project(ProjectModel& project) {
  std::unordered_map<std::string, std::vector<std::string>> by_simple_name;
  for_each_method(project, [&](MethodModel& m) {
    if (m.name != "<init>") {
      by_simple_name[m.name].push_back(m.qualified_name);
    }
  });
  for_each_method(project, [&](MethodModel& m) {
    auto link = [&](const std::string& name) {
      auto it = by_simple_name.find(name);
      if (it != by_simple_name.end()) {
        m.callees_internal.insert(it->second.begin(), it->second.end());
      }
    };
    for (const auto& call : m.calls) {
      if (call.kind == CallKind::Method) {
        link(call.callee_name);
      } else if (call.kind == CallKind::Property) {
        link(getter_for(call.callee_name));
        if (call.callee_name.starts_with("is")) {
          link(call.callee_name);
        }
      }
    }
  });
}

} // namespace conan
