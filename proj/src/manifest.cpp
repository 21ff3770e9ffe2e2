#include "conan/manifest.h"

#include <map>
#include <optional>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "conan/errors.h"

namespace conan {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kAndroidNamespace =
    "http://schemas.android.com/apk/res/android";
constexpr std::string_view kAttrKey = "<xmlattr>";

// Prefixes bound to the Android namespace in the document. `android` is
// assumed when the document never declares it.
class NamespaceScope {
 public:
  explicit NamespaceScope(const pt::ptree& root) {
    bool declared_android_prefix = false;
    if (auto attrs = root.get_child_optional(std::string(kAttrKey))) {
      for (const auto& [key, value] : *attrs) {
        if (key.rfind("xmlns:", 0) != 0) {
          continue;
        }
        std::string prefix = key.substr(6);
        if (prefix == "android") {
          declared_android_prefix = true;
        }
        if (value.data() == kAndroidNamespace) {
          android_prefixes_.push_back(std::move(prefix));
        }
      }
    }
    if (!declared_android_prefix) {
      android_prefixes_.push_back("android");
    }
  }

  std::optional<std::string> android_attr(
      const pt::ptree& element,
      std::string_view local_name) const {
    auto attrs = element.get_child_optional(std::string(kAttrKey));
    if (!attrs) {
      return std::nullopt;
    }
    for (const auto& prefix : android_prefixes_) {
      std::string key = prefix + ":" + std::string(local_name);
      if (auto value = attrs->get_optional<std::string>(key)) {
        return *value;
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<std::string> android_prefixes_;
};

void collect_activity_actions(
    const pt::ptree& activity,
    const NamespaceScope& ns,
    std::set<std::string>& out) {
  for (const auto& [tag, filter] : activity) {
    if (tag != "intent-filter") {
      continue;
    }
    for (const auto& [child_tag, child] : filter) {
      if (child_tag != "action") {
        continue;
      }
      if (auto name = ns.android_attr(child, "name")) {
        out.insert(*name);
      }
    }
  }
}

} // namespace

ManifestModel parse_manifest(std::string_view xml_text) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(xml_text)};
    pt::read_xml(in, doc, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw ManifestParseError(
        "malformed manifest XML (line " + std::to_string(e.line()) +
        "): " + e.message());
  }

  const pt::ptree* root = nullptr;
  for (const auto& [tag, child] : doc) {
    if (tag == "<xmldecl>" || tag == "<xmlcomment>") {
      continue;
    }
    if (tag != "manifest") {
      throw ManifestParseError(
          "unexpected root element <" + tag + ">, expected <manifest>");
    }
    root = &child;
  }
  if (root == nullptr) {
    throw ManifestParseError("document has no <manifest> root element");
  }

  NamespaceScope ns(*root);
  ManifestModel model;
  model.package_name = root->get<std::string>("<xmlattr>.package", "");

  for (const auto& [tag, child] : *root) {
    if (tag == "uses-permission") {
      if (auto name = ns.android_attr(child, "name")) {
        model.permissions.insert(*name);
      }
    } else if (tag == "application") {
      for (const auto& [app_tag, component] : child) {
        if (app_tag == "activity" || app_tag == "activity-alias") {
          collect_activity_actions(component, ns, model.intent_actions);
        }
      }
    }
  }
  return model;
}

bool has_permission(const ManifestModel& manifest, std::string_view name) {
  return manifest.permissions.contains(std::string(name));
}

bool has_intent_action(
    const ManifestModel& manifest,
    std::string_view action) {
  return manifest.intent_actions.contains(std::string(action));
}

} // namespace conan
