#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "core/time.hpp"

namespace newsdesk {

using json = nlohmann::json;
using Tag = std::string;
using TagSet = std::set<Tag>;

// Control-tag conventions. A "FOR>X" tag asks module X to process the item;
// "FAILED>X" marks an item X gave up on; "DONE>X" marks completion for
// scan-triggered modules.
constexpr const char* kForPrefix = "FOR>";
constexpr const char* kFailedPrefix = "FAILED>";
constexpr const char* kDonePrefix = "DONE>";

inline bool is_control_tag(const Tag& t) { return t.rfind(kForPrefix, 0) == 0; }

inline std::string control_target(const Tag& t) {
  return is_control_tag(t) ? t.substr(4) : std::string();
}

inline Tag for_tag(const std::string& module) { return kForPrefix + module; }
inline Tag failed_tag(const std::string& module) { return kFailedPrefix + module; }
inline Tag done_tag(const std::string& module) { return kDonePrefix + module; }

// One schema-less document on a blackboard. Fields hold source content,
// annotations hold module outputs; both are open-ended JSON maps.
struct Item {
  std::string item_id;
  json fields = json::object();
  TagSet tags;
  json annotations = json::object();
  std::string dedup_hash;
  Timestamp created_at = 0;

  bool has_tag(const Tag& t) const { return tags.count(t) > 0; }
  bool has_field(const std::string& name) const { return fields.contains(name); }

  json to_json() const;
  static Item from_json(const json& j);
};

inline json Item::to_json() const {
  return json{{"item_id", item_id},
              {"fields", fields},
              {"tags", tags},
              {"annotations", annotations},
              {"dedup_hash", dedup_hash},
              {"created_at", created_at}};
}

inline Item Item::from_json(const json& j) {
  Item it;
  it.item_id = j.at("item_id").get<std::string>();
  it.fields = j.value("fields", json::object());
  for (const auto& t : j.value("tags", json::array())) {
    it.tags.insert(t.get<std::string>());
  }
  it.annotations = j.value("annotations", json::object());
  it.dedup_hash = j.value("dedup_hash", "");
  it.created_at = j.value("created_at", Timestamp{0});
  return it;
}

}  // namespace newsdesk
