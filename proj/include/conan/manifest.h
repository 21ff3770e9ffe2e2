#pragma once

#include <set>
#include <string>
#include <string_view>

namespace conan {

inline constexpr std::string_view kInternetPermission =
    "android.permission.INTERNET";
inline constexpr std::string_view kNetworkStatePermission =
    "android.permission.ACCESS_NETWORK_STATE";
inline constexpr std::string_view kManageNetworkUsageAction =
    "android.intent.action.MANAGE_NETWORK_USAGE";

struct ManifestModel {
  std::string package_name;
  std::set<std::string> permissions;
  // Actions declared by intent filters of <activity> and <activity-alias>
  // elements only.
  std::set<std::string> intent_actions;

  bool operator==(const ManifestModel&) const = default;
};

/// Parses AndroidManifest.xml text. Attributes are matched by local name
/// under the Android namespace, so `android:name` and `a:name` (with `a`
/// bound to the Android namespace URI) are equivalent.
///
/// Throws ManifestParseError on malformed XML or a root other than
/// <manifest>.
ManifestModel parse_manifest(std::string_view xml_text);

bool has_permission(const ManifestModel& manifest, std::string_view name);
bool has_intent_action(const ManifestModel& manifest, std::string_view action);

} // namespace conan
