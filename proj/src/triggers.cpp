#include "conan/triggers.h"

#include <algorithm>
#include <cctype>

namespace conan {

namespace {

std::vector<LibraryProfile> make_profiles() {
  std::vector<LibraryProfile> p(4);
  p[0].library_id = LibraryId::HttpURLConnection;
  p[0].import_prefixes = {"java.net.HttpURLConnection", "java.net.URL"};
  p[0].trigger_methods = {{"openConnection", Flavor::Synchronous}};
  p[0].body_access_names = {"getResponseMessage", "getInputStream"};
  p[0].code_access_names = {"getResponseCode"};

  p[1].library_id = LibraryId::OkHttp;
  p[1].import_prefixes = {"okhttp3"};
  p[1].trigger_methods = {
      {"enqueue", Flavor::Asynchronous}, {"execute", Flavor::Synchronous}};
  p[1].response_callback_names = {"onResponse"};
  p[1].body_access_names = {"body"};
  p[1].code_access_names = {"code", "isSuccessful"};
  p[1].failure_handler_names = {"onFailure"};

  p[2].library_id = LibraryId::Retrofit;
  p[2].import_prefixes = {"retrofit2"};
  p[2].trigger_methods = {
      {"enqueue", Flavor::Asynchronous}, {"execute", Flavor::Synchronous}};
  p[2].response_callback_names = {"onResponse"};
  p[2].body_access_names = {"body"};
  p[2].code_access_names = {"code"};
  p[2].failure_handler_names = {"onFailure"};

  p[3].library_id = LibraryId::Volley;
  p[3].import_prefixes = {"com.android.volley"};
  p[3].trigger_methods = {{"add", Flavor::Asynchronous}};
  p[3].response_callback_names = {"Listener"};
  p[3].code_access_names = {"statusCode"};
  p[3].failure_handler_names = {"ErrorListener"};
  return p;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string strip_this(std::string_view receiver) {
  if (receiver.starts_with("this.")) {
    receiver.remove_prefix(5);
  }
  return std::string(receiver);
}

// `add` is a collection method too; it only triggers on a request queue.
bool is_request_queue(const SourceUnit& unit, const CallSite& call) {
  if (!call.receiver_hint) {
    return false;
  }
  const std::string& receiver = *call.receiver_hint;
  if (lower(receiver).find("requestqueue") != std::string::npos) {
    return true;
  }
  std::string name = strip_this(receiver);
  for (const auto& v : unit.variables) {
    if (v.name == name && v.type_text.find("RequestQueue") != std::string::npos) {
      return true;
    }
  }
  for (const CallSite* c : unit.all_calls()) {
    if (c->callee_name == "newRequestQueue" && c->assigned_to &&
        strip_this(*c->assigned_to) == name) {
      return true;
    }
  }
  return false;
}

} // namespace

std::string_view to_string(LibraryId id) {
  switch (id) {
    case LibraryId::HttpURLConnection:
      return "HttpURLConnection";
    case LibraryId::OkHttp:
      return "OkHttp";
    case LibraryId::Retrofit:
      return "Retrofit";
    case LibraryId::Volley:
      return "Volley";
  }
  return "";
}

std::optional<LibraryId> library_from_string(std::string_view name) {
  for (const auto& p : builtin_profiles()) {
    if (to_string(p.library_id) == name) {
      return p.library_id;
    }
  }
  return std::nullopt;
}

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::Synchronous ? "Synchronous" : "Asynchronous";
}

const std::vector<LibraryProfile>& builtin_profiles() {
  static const std::vector<LibraryProfile> kProfiles = make_profiles();
  return kProfiles;
}

const LibraryProfile& profile_for(LibraryId id) {
  return builtin_profiles()[static_cast<std::size_t>(id)];
}

bool import_matches(std::string_view import_name, std::string_view prefix) {
  if (import_name.ends_with(".*")) {
    std::string_view package = import_name.substr(0, import_name.size() - 2);
    if (package == prefix ||
        (package.size() > prefix.size() && package.starts_with(prefix) &&
         package[prefix.size()] == '.')) {
      return true;
    }
    // `java.net.*` brings in `java.net.URL` but not `java.net.a.URL`.
    return prefix.size() > package.size() + 1 && prefix.starts_with(package) &&
        prefix[package.size()] == '.' &&
        prefix.substr(package.size() + 1).find('.') == std::string_view::npos;
  }
  return import_name == prefix ||
      (import_name.size() > prefix.size() && import_name.starts_with(prefix) &&
       import_name[prefix.size()] == '.');
}

std::set<LibraryId> detect_library_usage(const SourceUnit& unit) {
  std::set<LibraryId> out;
  for (const auto& profile : builtin_profiles()) {
    for (const auto& import_name : unit.imports) {
      for (const auto& prefix : profile.import_prefixes) {
        if (import_matches(import_name, prefix)) {
          out.insert(profile.library_id);
        }
      }
    }
  }
  for (const CallSite* call : unit.all_calls()) {
    if (call->receiver_hint &&
        call->receiver_hint->find("HttpURLConnection") != std::string::npos) {
      out.insert(LibraryId::HttpURLConnection);
    }
  }
  return out;
}

std::vector<NetworkTrigger> find_network_triggers(const ProjectModel& project) {
  std::vector<NetworkTrigger> out;
  for (std::size_t ui = 0; ui < project.units.size(); ++ui) {
    const SourceUnit& unit = project.units[ui];
    std::set<LibraryId> libraries = detect_library_usage(unit);
    if (libraries.empty()) {
      continue;
    }
    const MethodModel* initializer = nullptr;
    for (const auto& init : project.initializers) {
      if (init.location.path == unit.path) {
        initializer = &init;
      }
    }
    auto consider = [&](const CallSite& call, const MethodModel* method) {
      if (call.kind != CallKind::Method) {
        return;
      }
      std::optional<NetworkTrigger> trigger;
      for (LibraryId id : libraries) {
        const LibraryProfile& profile = profile_for(id);
        for (const auto& tm : profile.trigger_methods) {
          if (tm.name != call.callee_name) {
            continue;
          }
          if (id == LibraryId::Volley && !is_request_queue(unit, call)) {
            continue;
          }
          if (!trigger) {
            trigger.emplace();
            trigger->call = call;
            trigger->library = id;
            trigger->flavor = tm.flavor;
            trigger->unit_index = ui;
            trigger->method = method;
            trigger->enclosing_method = method->qualified_name;
          } else {
            trigger->alternates.push_back(id);
          }
        }
      }
      if (trigger) {
        out.push_back(std::move(*trigger));
      }
    };
    for (const auto& m : unit.methods) {
      for (const auto& c : m.calls) {
        consider(c, &m);
      }
    }
    if (initializer != nullptr) {
      for (const auto& c : initializer->calls) {
        consider(c, initializer);
      }
    }
  }
  std::stable_sort(
      out.begin(),
      out.end(),
      [](const NetworkTrigger& a, const NetworkTrigger& b) {
        return a.call.location < b.call.location;
      });
  return out;
}

} // namespace conan
