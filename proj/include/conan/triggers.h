#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "conan/project.h"

namespace conan {

// Declaration order is the lexicographic order of the names, which is the
// tie-break for triggers matching several libraries.
enum class LibraryId { HttpURLConnection, OkHttp, Retrofit, Volley };

enum class Flavor { Synchronous, Asynchronous };

std::string_view to_string(LibraryId id);
std::optional<LibraryId> library_from_string(std::string_view name);
std::string_view to_string(Flavor flavor);

struct TriggerMethod {
  std::string name;
  Flavor flavor = Flavor::Synchronous;
};

struct LibraryProfile {
  LibraryId library_id = LibraryId::HttpURLConnection;
  // Package or class names; an import matches on a segment boundary.
  std::vector<std::string> import_prefixes;
  std::vector<TriggerMethod> trigger_methods;
  std::set<std::string> response_callback_names;
  std::set<std::string> body_access_names;
  std::set<std::string> code_access_names;
  std::set<std::string> failure_handler_names;
};

const std::vector<LibraryProfile>& builtin_profiles();
const LibraryProfile& profile_for(LibraryId id);

/// Libraries a unit uses, judged by its imports; HttpURLConnection also
/// counts when some receiver mentions it.
std::set<LibraryId> detect_library_usage(const SourceUnit& unit);

struct NetworkTrigger {
  CallSite call;
  LibraryId library = LibraryId::HttpURLConnection;
  // Other detected libraries whose trigger methods also match the call.
  std::vector<LibraryId> alternates;
  Flavor flavor = Flavor::Synchronous;
  std::string enclosing_method;
  std::size_t unit_index = 0;
  // Method or initializer of the owning project that contains the call.
  const MethodModel* method = nullptr;
};

/// Triggers of the whole project ordered by location. `method` pointers
/// refer into `project`.
std::vector<NetworkTrigger> find_network_triggers(const ProjectModel& project);

/// True when `import_name` (possibly a `.*` wildcard) brings in `prefix` or
/// something under it.
bool import_matches(std::string_view import_name, std::string_view prefix);

} // namespace conan
