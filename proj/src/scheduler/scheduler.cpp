#include "scheduler/scheduler.hpp"

#include <algorithm>

#include "core/errors.hpp"
#include "framework/settings.hpp"

namespace newsdesk {

std::vector<ScheduleEntry> parse_schedule(const std::string& text) {
  std::vector<ScheduleEntry> out;
  for (const auto& kv : parse_settings_blocks(text)) {
    ScheduleEntry e;
    if (!kv.count("module")) throw MissingKey("schedule entry missing 'module'");
    e.module = kv.at("module");
    if (!kv.count("period_seconds")) {
      throw MissingKey("schedule entry missing 'period_seconds'");
    }
    e.period_seconds = std::stoll(kv.at("period_seconds"));
    if (kv.count("offset_seconds")) {
      e.offset_seconds = std::stoll(kv.at("offset_seconds"));
    }
    if (!kv.count("timeout_seconds")) {
      throw MissingKey("schedule entry missing 'timeout_seconds'");
    }
    e.timeout_seconds = std::stod(kv.at("timeout_seconds"));
    if (kv.count("enabled")) {
      const std::string& v = kv.at("enabled");
      if (v == "true" || v == "1") {
        e.enabled = true;
      } else if (v == "false" || v == "0") {
        e.enabled = false;
      } else {
        throw InvalidValue("enabled must be true/false, got: " + v);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

void Scheduler::add(const ScheduleEntry& entry,
                    const ModuleExists& module_exists) {
  if (entry.period_seconds <= 0) {
    throw InvalidValue("schedule period must be positive");
  }
  if (entry.offset_seconds < 0 || entry.offset_seconds >= entry.period_seconds) {
    throw InvalidValue("schedule offset must be in [0, period)");
  }
  if (entry.timeout_seconds <= 0) {
    throw InvalidValue("schedule timeout must be positive");
  }
  if (module_exists && !module_exists(entry.module)) {
    throw UnknownModule("schedule references unknown module: " + entry.module);
  }
  for (const auto& e : entries_) {
    if (e.module == entry.module) {
      throw DuplicateEntry("one schedule entry per module: " + entry.module);
    }
  }
  entries_.push_back(entry);
}

std::optional<Timestamp> Scheduler::latest_slot(const ScheduleEntry& e,
                                                Timestamp now) {
  if (now < e.offset_seconds) return std::nullopt;
  Timestamp k = (now - e.offset_seconds) / e.period_seconds;
  return k * e.period_seconds + e.offset_seconds;
}

std::vector<std::string> Scheduler::due(Timestamp now) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (!e.enabled) continue;
    auto slot = latest_slot(e, now);
    if (!slot) continue;
    auto it = last_launch_.find(e.module);
    if (it == last_launch_.end() || it->second < *slot) out.push_back(e.module);
  }
  return out;
}

std::vector<RunReport> Scheduler::tick(Timestamp now, const Runner& run) {
  std::vector<RunReport> reports;
  for (const std::string& module : due(now)) {
    const auto entry = std::find_if(
        entries_.begin(), entries_.end(),
        [&](const ScheduleEntry& e) { return e.module == module; });
    last_launch_[module] = now;
    try {
      reports.push_back(run(module, now, entry->timeout_seconds));
    } catch (const std::exception&) {
      // A module that cannot even start still must not stop the others.
      RunReport r;
      r.module = module;
      r.started_at = now;
      r.ended_at = now;
      reports.push_back(r);
    }
  }
  return reports;
}

std::optional<Timestamp> Scheduler::next_due(const std::string& module,
                                             Timestamp now) const {
  for (const auto& e : entries_) {
    if (e.module != module || !e.enabled) continue;
    auto slot = latest_slot(e, now);
    auto it = last_launch_.find(e.module);
    bool launched_for_slot =
        slot && it != last_launch_.end() && it->second >= *slot;
    if (slot && !launched_for_slot) return *slot;
    Timestamp base = slot ? *slot : e.offset_seconds;
    return slot ? base + e.period_seconds : base;
  }
  return std::nullopt;
}

}  // namespace newsdesk
