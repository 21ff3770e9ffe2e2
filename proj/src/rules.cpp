#include "conan/rules.h"

#include <algorithm>
#include <map>

#include "conan/call_graph.h"

namespace conan {

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
  Category category;
  Level level;
  std::string_view description;
};

constexpr RuleInfo kRules[] = {
    {RuleId::INP, "INP", Category::CNP, Level::Project,
     "The app performs network requests but does not declare the INTERNET "
     "permission."},
    {RuleId::ACP, "ACP", Category::CNP, Level::Project,
     "The app queries network state but does not declare the "
     "ACCESS_NETWORK_STATE permission."},
    {RuleId::NP, "NP", Category::CSC, Level::Project,
     "No network connection check exists anywhere in the project."},
    {RuleId::NM, "NM", Category::CSC, Level::Method,
     "A method issuing network requests never checks the network connection."},
    {RuleId::TP, "TP", Category::CSC, Level::Project,
     "No network type check exists anywhere in the project."},
    {RuleId::TM, "TM", Category::CSC, Level::Method,
     "A method issuing network requests never checks the network type."},
    {RuleId::IP, "IP", Category::CSC, Level::Project,
     "No Internet availability check exists anywhere in the project."},
    {RuleId::IM, "IM", Category::CSC, Level::Method,
     "A method issuing network requests never checks Internet availability."},
    {RuleId::AMN, "AMN", Category::NMG, Level::Project,
     "No activity lets the user manage the app's network usage."},
    {RuleId::RI, "RI", Category::RH, Level::CallSite,
     "The request has no response callback implementation."},
    {RuleId::RB, "RB", Category::RH, Level::CallSite,
     "The response body is used without a null check."},
    {RuleId::RC, "RC", Category::RH, Level::CallSite,
     "The HTTP status code of the response is never checked."},
    {RuleId::OF, "OF", Category::RH, Level::CallSite,
     "Request failures are not handled."},
    {RuleId::SYN, "SYN", Category::TS, Level::CallSite,
     "The request is executed synchronously."},
    {RuleId::WM, "WM", Category::TS, Level::File,
     "A legacy job scheduling API is used instead of WorkManager."},
    {RuleId::OK, "OK", Category::LBS, Level::Project,
     "More than one OkHttpClient instance is created."},
};

constexpr std::string_view kCategoryNames[] = {
    "CNP", "CSC", "NMG", "RH", "TS", "LBS"};

const RuleInfo& info(RuleId rule) {
  return kRules[static_cast<std::size_t>(rule)];
}

SourceLocation first_line_of(const std::string& path) {
  return {path, 1, 1, 1, 1};
}

Finding make_finding(
    RuleId rule,
    std::string message,
    std::vector<SourceLocation> locations,
    std::optional<LibraryId> library = std::nullopt) {
  Finding f;
  f.rule = rule;
  f.category = category_of(rule);
  f.message = std::move(message);
  std::sort(locations.begin(), locations.end());
  locations.erase(std::unique(locations.begin(), locations.end()), locations.end());
  f.locations = std::move(locations);
  f.library = library;
  return f;
}

std::vector<SourceLocation> trigger_locations(
    const std::vector<NetworkTrigger>& triggers) {
  std::vector<SourceLocation> out;
  for (const auto& t : triggers) {
    out.push_back(t.call.location);
  }
  return out;
}

std::string count_phrase(std::size_t n, std::string_view noun) {
  return std::to_string(n) + " " + std::string(noun) + (n == 1 ? "" : "s");
}

bool has_name(const CallSite& call, const std::set<std::string>& names) {
  return std::any_of(names.begin(), names.end(), [&](const auto& n) {
    return call_matches_name(call, n);
  });
}

// Profiles of the trigger's library and its alternates.
std::vector<const LibraryProfile*> profiles_of(const NetworkTrigger& t) {
  std::vector<const LibraryProfile*> out{&profile_for(t.library)};
  for (LibraryId id : t.alternates) {
    out.push_back(&profile_for(id));
  }
  return out;
}

std::set<std::string> union_of(
    const std::vector<const LibraryProfile*>& profiles,
    std::set<std::string> LibraryProfile::*field) {
  std::set<std::string> out;
  for (const auto* p : profiles) {
    out.insert((p->*field).begin(), (p->*field).end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Callback resolution

struct CallbackBody {
  CallbackKind kind = CallbackKind::Response;
  std::vector<const CallSite*> calls;
  const CallbackRegion* region = nullptr;
  bool has_statements = false;
};

struct ResolvedCallbacks {
  // False when the callback object cannot be located; callback rules are
  // then skipped for the trigger.
  bool resolved = false;
  std::vector<CallbackBody> bodies;
  // Listener passed by reference: present, but its body is not visible.
  bool opaque_response = false;
  bool opaque_failure = false;

  const CallbackBody* find(CallbackKind kind) const {
    for (const auto& b : bodies) {
      if (b.kind == kind) {
        return &b;
      }
    }
    return nullptr;
  }
};

class CallbackResolver {
 public:
  CallbackResolver(const ProjectModel& project, const CallGraph& graph)
      : project_(project), graph_(graph) {}

  ResolvedCallbacks resolve(const NetworkTrigger& t) const {
    const SourceUnit& unit = project_.units[t.unit_index];
    if (t.library == LibraryId::Volley) {
      return resolve_volley(unit, t);
    }
    ResolvedCallbacks out;
    if (t.call.arguments.empty()) {
      return out;
    }
    const Argument& arg = t.call.arguments.front();
    switch (arg.kind) {
      case ArgumentKind::Null:
        out.resolved = true;
        return out;
      case ArgumentKind::Call:
        return from_instance(unit, unit.find_call(*arg.call_id));
      case ArgumentKind::Identifier:
        return from_instance(unit, constructor_assigned(unit, arg.text, t));
      case ArgumentKind::This:
        return from_type(enclosing_type(t.enclosing_method));
      default:
        return out;
    }
  }

 private:
  static std::string strip_this(std::string_view s) {
    if (s.starts_with("this.")) {
      s.remove_prefix(5);
    }
    return std::string(s);
  }

  static std::string enclosing_type(const std::string& qualified) {
    auto dot = qualified.rfind('.');
    return dot == std::string::npos ? std::string() : qualified.substr(0, dot);
  }

  // Latest instantiation stored into `name` before the trigger, or the
  // first one after it.
  static const CallSite* constructor_assigned(
      const SourceUnit& unit,
      const std::string& name,
      const NetworkTrigger& t) {
    const CallSite* before = nullptr;
    const CallSite* after = nullptr;
    std::string wanted = strip_this(name);
    for (const CallSite* c : unit.all_calls()) {
      if (c->kind != CallKind::Constructor || !c->assigned_to ||
          strip_this(*c->assigned_to) != wanted) {
        continue;
      }
      if (c->location < t.call.location) {
        before = c;
      } else if (after == nullptr) {
        after = c;
      }
    }
    return before != nullptr ? before : after;
  }

  std::vector<const CallSite*> calls_of_region(
      const SourceUnit& unit,
      std::size_t index) const {
    std::vector<const CallSite*> out;
    for (const CallSite* c : unit.all_calls()) {
      if (c->callback_index && *c->callback_index == index) {
        out.push_back(c);
      }
    }
    return out;
  }

  CallbackBody body_of_region(const SourceUnit& unit, std::size_t index) const {
    const CallbackRegion& r = unit.callbacks[index];
    CallbackBody b;
    b.kind = r.kind;
    b.region = &r;
    b.calls = calls_of_region(unit, index);
    b.has_statements = r.has_statements;
    return b;
  }

  ResolvedCallbacks from_instance(
      const SourceUnit& unit,
      const CallSite* instance) const {
    ResolvedCallbacks out;
    if (instance == nullptr || instance->kind != CallKind::Constructor) {
      return out;
    }
    for (std::size_t i = 0; i < unit.callbacks.size(); ++i) {
      if (unit.callbacks[i].host_call == instance->id) {
        out.bodies.push_back(body_of_region(unit, i));
      }
    }
    if (!out.bodies.empty()) {
      out.resolved = true;
      return out;
    }
    // `new MyCallback()` of a project class implementing the interface.
    return from_type(instance->callee_name);
  }

  // Callback methods declared directly by a project type.
  ResolvedCallbacks from_type(const std::string& type) const {
    ResolvedCallbacks out;
    if (type.empty()) {
      return out;
    }
    auto simple = type.substr(type.rfind('.') == std::string::npos
                                  ? 0
                                  : type.rfind('.') + 1);
    bool type_known = false;
    for (const auto& unit : project_.units) {
      for (const auto& t : unit.types_declared) {
        if (t == type || t == simple || t.ends_with("." + simple)) {
          type_known = true;
          add_methods(t, out);
        }
      }
    }
    out.resolved = type_known;
    return out;
  }

  void add_methods(const std::string& type, ResolvedCallbacks& out) const {
    auto add = [&](const std::string& name, CallbackKind kind) {
      for (const MethodModel* m : graph_.methods_named(type + "." + name)) {
        CallbackBody b;
        b.kind = kind;
        for (const auto& c : m->calls) {
          b.calls.push_back(&c);
        }
        for (const auto& c : m->constructor_calls) {
          b.calls.push_back(&c);
        }
        b.has_statements = !b.calls.empty();
        out.bodies.push_back(std::move(b));
      }
    };
    add("onResponse", CallbackKind::Response);
    add("onFailure", CallbackKind::Failure);
  }

  // Volley requests take the response listener and the error listener as
  // their last two constructor arguments.
  ResolvedCallbacks resolve_volley(
      const SourceUnit& unit,
      const NetworkTrigger& t) const {
    ResolvedCallbacks out;
    if (t.call.arguments.empty()) {
      return out;
    }
    const Argument& arg = t.call.arguments.front();
    const CallSite* request = nullptr;
    if (arg.kind == ArgumentKind::Call) {
      request = unit.find_call(*arg.call_id);
    } else if (arg.kind == ArgumentKind::Identifier) {
      request = constructor_assigned(unit, arg.text, t);
    }
    if (request == nullptr || request->kind != CallKind::Constructor ||
        request->arguments.size() < 3) {
      return out;
    }
    out.resolved = true;
    std::size_t n = request->arguments.size();
    auto place = [&](const Argument& a, CallbackKind kind, bool& opaque) {
      switch (a.kind) {
        case ArgumentKind::Null:
          return;
        case ArgumentKind::Lambda:
        case ArgumentKind::Call: {
          std::uint32_t host =
              a.kind == ArgumentKind::Call ? *a.call_id : request->id;
          for (std::size_t i = 0; i < unit.callbacks.size(); ++i) {
            const auto& r = unit.callbacks[i];
            if (r.host_call == host &&
                (a.kind == ArgumentKind::Call || r.kind == kind) &&
                r.location >= first_location(a, unit)) {
              CallbackBody b = body_of_region(unit, i);
              b.kind = kind;
              out.bodies.push_back(std::move(b));
              return;
            }
          }
          opaque = true;
          return;
        }
        default:
          opaque = true;
          return;
      }
    };
    place(request->arguments[n - 2], CallbackKind::Response, out.opaque_response);
    place(request->arguments[n - 1], CallbackKind::ErrorListener, out.opaque_failure);
    return out;
  }

  static SourceLocation first_location(const Argument& a, const SourceUnit& unit) {
    if (a.kind == ArgumentKind::Call) {
      if (const CallSite* c = unit.find_call(*a.call_id)) {
        return c->location;
      }
    }
    return {};
  }

  const ProjectModel& project_;
  const CallGraph& graph_;
};

// ---------------------------------------------------------------------------
// Connection status checks

struct CheckPair {
  RuleId project_rule;
  RuleId method_rule;
  std::set<std::string> names;
  ArgFilter filter;
  std::string_view what;
};

std::string article(std::string_view noun) {
  return noun.starts_with('I') ? "an" : "a";
}

std::vector<CheckPair> check_pairs() {
  auto capability_filter = [](const std::vector<std::string>& tokens) {
    return std::any_of(tokens.begin(), tokens.end(), [](const auto& t) {
      return t == "NET_CAPABILITY_INTERNET" || t == "NET_CAPABILITY_VALIDATED";
    });
  };
  return {
      {RuleId::NP, RuleId::NM, {"isConnected", "onAvailable"}, nullptr,
       "network connection"},
      {RuleId::TP, RuleId::TM, {"getType", "hasTransport"}, nullptr,
       "network type"},
      {RuleId::IP, RuleId::IM, {"hasCapability"}, capability_filter,
       "Internet availability"},
  };
}

std::vector<const MethodModel*> all_methods(const ProjectModel& project) {
  std::vector<const MethodModel*> out;
  for (const auto& unit : project.units) {
    for (const auto& m : unit.methods) {
      out.push_back(&m);
    }
  }
  for (const auto& m : project.initializers) {
    out.push_back(&m);
  }
  return out;
}

bool imports_any(const SourceUnit& unit, std::initializer_list<std::string_view> names) {
  for (const auto& i : unit.imports) {
    for (auto n : names) {
      if (import_matches(i, n)) {
        return true;
      }
    }
  }
  return false;
}

constexpr std::string_view kLegacySchedulers[] = {
    "FirebaseJobDispatcher", "GcmNetworkManager", "JobScheduler"};

bool is_legacy_scheduler_import(std::string_view import_name) {
  auto dot = import_name.rfind('.');
  std::string_view last =
      dot == std::string_view::npos ? import_name : import_name.substr(dot + 1);
  return std::find(std::begin(kLegacySchedulers), std::end(kLegacySchedulers),
                   last) != std::end(kLegacySchedulers);
}

std::string library_label(const NetworkTrigger& t) {
  return std::string(to_string(t.library));
}

} // namespace

const std::vector<RuleId>& all_rules() {
  static const std::vector<RuleId> kAll = [] {
    std::vector<RuleId> v;
    for (const auto& r : kRules) {
      v.push_back(r.id);
    }
    return v;
  }();
  return kAll;
}

std::string_view to_string(RuleId rule) {
  return info(rule).name;
}

std::optional<RuleId> rule_from_string(std::string_view name) {
  for (const auto& r : kRules) {
    if (r.name == name) {
      return r.id;
    }
  }
  return std::nullopt;
}

std::string_view to_string(Category category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<Category> category_from_string(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kCategoryNames); ++i) {
    if (kCategoryNames[i] == name) {
      return static_cast<Category>(i);
    }
  }
  return std::nullopt;
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Project:
      return "Project";
    case Level::Method:
      return "Method";
    case Level::CallSite:
      return "CallSite";
    case Level::File:
      return "File";
  }
  return "";
}

std::string_view to_string(Severity) {
  return "Warning";
}

Category category_of(RuleId rule) {
  return info(rule).category;
}

Level level_of(RuleId rule) {
  return info(rule).level;
}

std::string_view describe(RuleId rule) {
  return info(rule).description;
}

std::vector<Finding> detect_cnp(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers) {
  std::vector<Finding> out;
  if (!triggers.empty() &&
      !has_permission(project.manifest, kInternetPermission)) {
    out.push_back(make_finding(
        RuleId::INP,
        count_phrase(triggers.size(), "network request") +
            " found but the manifest does not declare " +
            std::string(kInternetPermission) + ".",
        trigger_locations(triggers)));
  }
  if (!has_permission(project.manifest, kNetworkStatePermission)) {
    std::vector<SourceLocation> importing;
    for (const auto& unit : project.units) {
      if (imports_any(unit, {"android.net.ConnectivityManager",
                             "android.net.NetworkInfo"})) {
        importing.push_back(first_line_of(unit.path));
      }
    }
    if (!importing.empty()) {
      out.push_back(make_finding(
          RuleId::ACP,
          count_phrase(importing.size(), "file") +
              " query network state but the manifest does not declare " +
              std::string(kNetworkStatePermission) + ".",
          std::move(importing)));
    }
  }
  return out;
}

std::vector<Finding> detect_csc(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers,
    const RuleConfig& config) {
  std::vector<Finding> out;
  if (triggers.empty()) {
    return out;
  }
  CallGraph graph(project);
  std::vector<const MethodModel*> everything = all_methods(project);

  // Trigger-holding methods in first-trigger order.
  std::vector<std::pair<const MethodModel*, std::vector<SourceLocation>>> holders;
  for (const auto& t : triggers) {
    auto it = std::find_if(holders.begin(), holders.end(), [&](const auto& h) {
      return h.first == t.method;
    });
    if (it == holders.end()) {
      holders.emplace_back(t.method, std::vector<SourceLocation>{});
      it = std::prev(holders.end());
    }
    it->second.push_back(t.call.location);
  }

  for (const auto& pair : check_pairs()) {
    if (find_calls(everything, pair.names, pair.filter).empty()) {
      out.push_back(make_finding(
          pair.project_rule,
          "No " + std::string(pair.what) + " check in the project; " +
              count_phrase(triggers.size(), "network request") +
              " run unchecked.",
          trigger_locations(triggers)));
      continue;
    }
    for (const auto& [method, locations] : holders) {
      auto scope = graph.resolve_scope(*method, config.interprocedural_depth);
      if (!find_calls(scope, pair.names, pair.filter).empty()) {
        continue;
      }
      out.push_back(make_finding(
          pair.method_rule,
          "Method " + method->qualified_name + " issues " +
              count_phrase(locations.size(), "network request") +
              " without " + article(pair.what) + " " + std::string(pair.what) + " check.",
          locations));
    }
  }
  return out;
}

std::vector<Finding> detect_nmg(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers) {
  std::vector<Finding> out;
  if (triggers.empty() ||
      has_intent_action(project.manifest, kManageNetworkUsageAction)) {
    return out;
  }
  auto locations = trigger_locations(triggers);
  locations.push_back(first_line_of(project.manifest_rel_path));
  out.push_back(make_finding(
      RuleId::AMN,
      "No activity declares an intent filter for " +
          std::string(kManageNetworkUsageAction) + ".",
      std::move(locations)));
  return out;
}

std::vector<Finding> detect_rh(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers) {
  std::vector<Finding> out;
  CallGraph graph(project);
  CallbackResolver resolver(project, graph);

  for (const auto& t : triggers) {
    auto profiles = profiles_of(t);
    auto body_names = union_of(profiles, &LibraryProfile::body_access_names);
    auto code_names = union_of(profiles, &LibraryProfile::code_access_names);
    std::string lib = library_label(t);

    if (t.flavor == Flavor::Synchronous) {
      const MethodModel& m = *t.method;
      for (const auto& c : m.calls) {
        if (c.location >= t.call.location && has_name(c, body_names) &&
            !c.guarded_by_null_check) {
          out.push_back(make_finding(
              RuleId::RB,
              lib + " response content read through " + c.callee_name +
                  " without a null check.",
              {c.location}, t.library));
        }
      }
      bool code_checked = std::any_of(m.calls.begin(), m.calls.end(), [&](const auto& c) {
        return c.in_decision && has_name(c, code_names);
      });
      if (!code_checked) {
        out.push_back(make_finding(
            RuleId::RC,
            lib + " request whose HTTP status code is never checked.",
            {t.call.location}, t.library));
      }
      if (!t.call.inside_try_with_nonempty_catch) {
        out.push_back(make_finding(
            RuleId::OF,
            lib + " synchronous request outside a try block with a "
                  "non-empty catch.",
            {t.call.location}, t.library));
      }
      continue;
    }

    ResolvedCallbacks cb = resolver.resolve(t);
    if (!cb.resolved) {
      continue;
    }
    const CallbackBody* response = cb.find(CallbackKind::Response);
    CallbackKind failure_kind = t.library == LibraryId::Volley
        ? CallbackKind::ErrorListener
        : CallbackKind::Failure;
    const CallbackBody* failure = cb.find(failure_kind);

    if (!cb.opaque_response &&
        (response == nullptr || !response->has_statements)) {
      out.push_back(make_finding(
          RuleId::RI,
          lib + " request without a response callback implementation.",
          {t.call.location}, t.library));
    } else if (response != nullptr) {
      if (t.library == LibraryId::Volley) {
        const CallbackRegion* r = response->region;
        if (r != nullptr && !r->payload_uses.empty() &&
            !r->payload_null_checked) {
          out.push_back(make_finding(
              RuleId::RB,
              lib + " listener uses its response '" + r->payload.value_or("") +
                  "' without a null check.",
              r->payload_uses, t.library));
        }
      } else {
        for (const CallSite* c : response->calls) {
          if (has_name(*c, body_names) && !c->guarded_by_null_check) {
            out.push_back(make_finding(
                RuleId::RB,
                lib + " response body read through " + c->callee_name +
                    " without a null check.",
                {c->location}, t.library));
          }
        }
      }
      bool code_checked = false;
      for (const auto& b : cb.bodies) {
        for (const CallSite* c : b.calls) {
          code_checked = code_checked || (c->in_decision && has_name(*c, code_names));
        }
      }
      if (!code_checked) {
        out.push_back(make_finding(
            RuleId::RC,
            lib + " response callback never checks the HTTP status code.",
            {t.call.location}, t.library));
      }
    }

    if (!cb.opaque_failure && (failure == nullptr || !failure->has_statements)) {
      out.push_back(make_finding(
          RuleId::OF,
          lib + (t.library == LibraryId::Volley
                     ? " request without an ErrorListener implementation."
                     : " request without an onFailure implementation."),
          {t.call.location}, t.library));
    }
  }
  return out;
}

std::vector<Finding> detect_ts(
    const ProjectModel& project,
    const std::vector<NetworkTrigger>& triggers) {
  std::vector<Finding> out;
  for (const auto& t : triggers) {
    if (t.flavor == Flavor::Synchronous) {
      out.push_back(make_finding(
          RuleId::SYN,
          library_label(t) + " request executed synchronously through " +
              t.call.callee_name + ".",
          {t.call.location}, t.library));
    }
  }
  for (const auto& unit : project.units) {
    for (const auto& [name, location] : unit.import_locations) {
      if (is_legacy_scheduler_import(name)) {
        out.push_back(make_finding(
            RuleId::WM,
            "Legacy scheduler " + name.substr(name.rfind('.') + 1) +
                " imported; prefer WorkManager.",
            {location}));
        break;
      }
    }
  }
  return out;
}

std::vector<Finding> detect_lbs(const ProjectModel& project) {
  std::vector<SourceLocation> locations;
  auto scan = [&](const std::vector<CallSite>& calls) {
    for (const auto& c : calls) {
      if (c.kind == CallKind::Constructor && c.callee_name == "OkHttpClient") {
        locations.push_back(c.location);
      }
    }
  };
  for (const auto& unit : project.units) {
    for (const auto& m : unit.methods) {
      scan(m.constructor_calls);
    }
    scan(unit.top_level_calls);
  }
  std::vector<Finding> out;
  if (locations.size() >= 2) {
    std::size_t n = locations.size();
    out.push_back(make_finding(
        RuleId::OK,
        std::to_string(n) + " OkHttpClient instances are created; share one.",
        std::move(locations), LibraryId::OkHttp));
  }
  return out;
}

void normalize_findings(std::vector<Finding>& findings) {
  for (auto& f : findings) {
    std::sort(f.locations.begin(), f.locations.end());
  }
  std::stable_sort(
      findings.begin(),
      findings.end(),
      [](const Finding& a, const Finding& b) {
        if (a.rule != b.rule) {
          return a.rule < b.rule;
        }
        return a.locations < b.locations;
      });
  findings.erase(
      std::unique(
          findings.begin(),
          findings.end(),
          [](const Finding& a, const Finding& b) {
            return a.rule == b.rule && a.locations == b.locations;
          }),
      findings.end());
}

std::vector<Finding> evaluate(
    const ProjectModel& project,
    const RuleConfig& config) {
  auto triggers = find_network_triggers(project);
  std::vector<Finding> all;
  auto append = [&](std::vector<Finding> part) {
    for (auto& f : part) {
      if (config.enabled_rules.contains(f.rule)) {
        all.push_back(std::move(f));
      }
    }
  };
  append(detect_cnp(project, triggers));
  append(detect_csc(project, triggers, config));
  append(detect_nmg(project, triggers));
  append(detect_rh(project, triggers));
  append(detect_ts(project, triggers));
  append(detect_lbs(project));
  normalize_findings(all);
  return all;
}

} // namespace conan
