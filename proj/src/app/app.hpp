#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "framework/module.hpp"
#include "reports/reports.hpp"
#include "scheduler/scheduler.hpp"
#include "store/blackboard.hpp"

namespace newsdesk {

// Everything the CLI does, as a library. One App owns one store directory:
//
//   <root>/blackboards/<name>/     item data
//   <root>/modules/<name>.conf     registered module settings
//   <root>/schedule.conf           schedule table
//   <root>/private/<name>.json     per-module private stores
//   <root>/state/*.json            virtual clock, launch history, last runs
//
// Construction reloads all of it, so every CLI invocation sees the same
// system state.
class App {
 public:
  explicit App(std::filesystem::path root, bool create = false);

  Store& store() { return store_; }
  const Store& store() const { return store_; }
  ModuleRegistry& registry() { return registry_; }

  // Validates the settings document, builds its routine (loading every
  // resource file it names, relative paths resolved against base_dir) and
  // persists the normalized settings.
  ModuleSpec register_module(const std::string& settings_document,
                             const std::string& base_dir);
  void unregister_module(const std::string& name);

  // Replaces the schedule table after validating every entry.
  void set_schedule(const std::string& schedule_document);
  const Scheduler& scheduler() const { return scheduler_; }

  // Tab-separated manifest, one source per line:
  //   feed <TAB> file <TAB> feed_id <TAB> outlet <TAB> lang <TAB> location
  //   tweets <TAB> file [<TAB> tag,tag,...]
  // File paths are resolved against the manifest's own directory.
  json ingest_manifest(const std::string& manifest_path);

  Timestamp virtual_now() const { return virtual_now_; }
  void set_virtual_now(Timestamp t);

  // One schedule step: advance the virtual clock by the smallest enabled
  // period and launch whatever became due.
  std::vector<RunReport> tick();

  // Move the clock to an externally chosen instant (the wall-clock driver)
  // and launch whatever became due.
  std::vector<RunReport> tick_at(Timestamp now);

  // Immediate launch outside the schedule. timeout <= 0 means no deadline.
  RunReport run_now(const std::string& module, double timeout_seconds = 0.0);

  // Maintenance pass: document frequencies over the input corpus of every
  // feature-extraction module, written to its private store.
  json build_idf();

  // type: topics | mood_timeline | outlets | style_distances.
  // options: topics (csv), mood, outlets (csv), begin, end (timestamps).
  Report build_report(const std::string& type, const json& options);

  json status() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  void load_modules();
  void load_state();
  void save_state();
  PrivateStore& private_store(const std::string& module);
  std::vector<std::string> known_topics() const;
  std::vector<std::string> known_moods() const;
  Scheduler::Runner runner();

  std::filesystem::path root_;
  Store store_;
  ModuleRegistry registry_;
  Scheduler scheduler_;
  std::map<std::string, std::unique_ptr<PrivateStore>> privates_;
  std::map<std::string, RunReport> last_runs_;
  Timestamp virtual_now_ = 0;
};

}  // namespace newsdesk
