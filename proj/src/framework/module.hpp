#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "framework/settings.hpp"
#include "store/blackboard.hpp"
#include "store/item.hpp"

namespace newsdesk {

enum class TriggerMode {
  kTag,   // selection requires the module's FOR> tag
  kScan,  // selection on required tags/fields only, DONE> marker excluded
};

// Declarative description of one module, loaded from a settings file. The
// same processing routine can back many specs (one per settings file).
struct ModuleSpec {
  std::string name;
  std::string description;
  std::string input_blackboard;
  std::string output_blackboard;
  TagSet required_tags;
  std::set<std::string> required_fields;
  TagSet emit_tags;
  int max_items_per_run = 1;
  int threads = 1;
  TriggerMode trigger_mode = TriggerMode::kTag;
  std::map<std::string, std::string> params;  // "params." keys, prefix stripped

  std::string param(const std::string& key) const {
    auto it = params.find(key);
    return it == params.end() ? std::string() : it->second;
  }
};

// Mandatory keys: name, input_blackboard, max_items_per_run, threads.
ModuleSpec load_spec(const std::string& settings_document);

struct RunReport {
  std::string module;
  Timestamp started_at = 0;
  Timestamp ended_at = 0;
  int items_selected = 0;
  int items_succeeded = 0;
  int items_failed = 0;
  bool timed_out = false;

  json to_json() const;
  static RunReport from_json(const json& j);
};

// Per-module key-value persistence, invisible to blackboard queries and to
// every other module.
class PrivateStore {
 public:
  PrivateStore(std::filesystem::path file, std::string module);

  std::optional<json> get(const std::string& key) const;
  void put(const std::string& key, const json& value);
  void erase(const std::string& key);
  const std::string& module() const { return module_; }

 private:
  void save_locked();

  mutable std::mutex mu_;
  std::filesystem::path file_;
  std::string module_;
  json data_;
};

// What a processing routine may produce for one item; nothing else escapes.
struct NewItemDraft {
  json fields = json::object();
  TagSet tags;
};

struct Outcome {
  json new_fields = json::object();  // first-writer-wins, never overwrites
  json annotations = json::object();
  TagSet add_tags;
  TagSet remove_tags;
  std::vector<NewItemDraft> new_items;  // written to the output blackboard
};

using Routine = std::function<Outcome(const Item&, PrivateStore&)>;

struct RunOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  int retry_cap = 3;
  Timestamp now = 0;  // virtual clock for report timestamps; 0 = wall clock
};

// The generic run loop: select up to max_items_per_run matching items,
// process each independently (concurrently up to spec.threads), write
// results atomically per item, consume the trigger tag on success, retry
// failures up to retry_cap before swapping the trigger for FAILED>.
RunReport run_module(Store& store, const ModuleSpec& spec,
                     const Routine& routine, PrivateStore& private_store,
                     const RunOptions& options = {});

// Selection query the run loop uses (exposed for status/introspection).
Query selection_query(const ModuleSpec& spec);

class ModuleRegistry {
 public:
  void add(ModuleSpec spec, Routine routine);
  void remove(const std::string& name);
  bool has(const std::string& name) const;
  const ModuleSpec& spec(const std::string& name) const;
  const Routine& routine(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::pair<ModuleSpec, Routine>> modules_;
};

}  // namespace newsdesk
