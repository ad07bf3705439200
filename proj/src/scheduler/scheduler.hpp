#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/time.hpp"
#include "framework/module.hpp"

namespace newsdesk {

struct ScheduleEntry {
  std::string module;
  std::int64_t period_seconds = 0;
  std::int64_t offset_seconds = 0;  // time slot within the period
  double timeout_seconds = 0.0;
  bool enabled = true;
};

// Schedule file: same key-value format as module settings, one blank-line
// separated block per entry with keys module, period_seconds, offset_seconds,
// timeout_seconds, enabled.
std::vector<ScheduleEntry> parse_schedule(const std::string& text);

// Launches modules at their time slots. Knows clocks and the schedule table
// only; item content never reaches this class.
class Scheduler {
 public:
  using ModuleExists = std::function<bool(const std::string&)>;
  using Runner = std::function<RunReport(const std::string& module,
                                         Timestamp now,
                                         double timeout_seconds)>;

  void add(const ScheduleEntry& entry, const ModuleExists& module_exists);

  std::vector<std::string> due(Timestamp now) const;
  std::vector<RunReport> tick(Timestamp now, const Runner& run);

  const std::vector<ScheduleEntry>& entries() const { return entries_; }
  std::optional<Timestamp> next_due(const std::string& module,
                                    Timestamp now) const;

  // Launch history, persisted across CLI invocations by the caller.
  const std::map<std::string, Timestamp>& launch_history() const {
    return last_launch_;
  }
  void set_launch_history(std::map<std::string, Timestamp> h) {
    last_launch_ = std::move(h);
  }

 private:
  // Latest slot time <= now for this entry, if any.
  static std::optional<Timestamp> latest_slot(const ScheduleEntry& e,
                                              Timestamp now);

  std::vector<ScheduleEntry> entries_;
  std::map<std::string, Timestamp> last_launch_;
};

}  // namespace newsdesk
