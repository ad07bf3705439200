#include "framework/module.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "core/errors.hpp"

namespace newsdesk {
namespace {

std::string retry_key(const std::string& module) {
  return "sys.retries." + module;
}

int parse_positive_int(const SettingsMap& kv, const std::string& key) {
  try {
    int v = std::stoi(kv.at(key));
    if (v < 1) throw InvalidValue(key + " must be >= 1");
    return v;
  } catch (const InvalidValue&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidValue(key + " is not a valid integer: " + kv.at(key));
  }
}

}  // namespace

ModuleSpec load_spec(const std::string& settings_document) {
  SettingsMap kv = parse_settings(settings_document);
  for (const char* key : {"name", "input_blackboard", "max_items_per_run",
                          "threads"}) {
    if (!kv.count(key)) throw MissingKey(std::string("missing key: ") + key);
  }
  ModuleSpec spec;
  spec.name = kv["name"];
  if (spec.name.empty()) throw InvalidValue("name must be non-empty");
  spec.description = kv.count("description") ? kv["description"] : "";
  spec.input_blackboard = kv["input_blackboard"];
  if (spec.input_blackboard.empty()) {
    throw InvalidValue("input_blackboard must be non-empty");
  }
  spec.output_blackboard = kv.count("output_blackboard")
                               ? kv["output_blackboard"]
                               : spec.input_blackboard;
  spec.max_items_per_run = parse_positive_int(kv, "max_items_per_run");
  spec.threads = parse_positive_int(kv, "threads");
  if (kv.count("required_tags")) {
    spec.required_tags = parse_tag_list(kv["required_tags"]);
  }
  if (kv.count("required_fields")) {
    for (const auto& f : parse_tag_list(kv["required_fields"])) {
      spec.required_fields.insert(f);
    }
  }
  if (kv.count("emit_tags")) spec.emit_tags = parse_tag_list(kv["emit_tags"]);
  if (kv.count("trigger_mode")) {
    const std::string& mode = kv["trigger_mode"];
    if (mode == "tag") {
      spec.trigger_mode = TriggerMode::kTag;
    } else if (mode == "scan") {
      spec.trigger_mode = TriggerMode::kScan;
    } else {
      throw InvalidValue("trigger_mode must be 'tag' or 'scan', got: " + mode);
    }
  }
  if (spec.trigger_mode == TriggerMode::kScan &&
      !spec.emit_tags.count(done_tag(spec.name))) {
    throw InvalidValue("scan-triggered module must emit its done marker " +
                       done_tag(spec.name));
  }
  for (const auto& [key, value] : kv) {
    if (key.rfind("params.", 0) == 0) {
      spec.params[key.substr(7)] = value;
    }
  }
  return spec;
}

json RunReport::to_json() const {
  return json{{"module", module},
              {"started_at", started_at},
              {"ended_at", ended_at},
              {"items_selected", items_selected},
              {"items_succeeded", items_succeeded},
              {"items_failed", items_failed},
              {"timed_out", timed_out}};
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.module = j.value("module", "");
  r.started_at = j.value("started_at", Timestamp{0});
  r.ended_at = j.value("ended_at", Timestamp{0});
  r.items_selected = j.value("items_selected", 0);
  r.items_succeeded = j.value("items_succeeded", 0);
  r.items_failed = j.value("items_failed", 0);
  r.timed_out = j.value("timed_out", false);
  return r;
}

PrivateStore::PrivateStore(std::filesystem::path file, std::string module)
    : file_(std::move(file)), module_(std::move(module)), data_(json::object()) {
  std::ifstream in(file_);
  if (in) {
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_object()) data_ = std::move(parsed);
  }
}

std::optional<json> PrivateStore::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = data_.find(key);
  if (it == data_.end()) return std::nullopt;
  return *it;
}

void PrivateStore::put(const std::string& key, const json& value) {
  std::lock_guard lock(mu_);
  data_[key] = value;
  save_locked();
}

void PrivateStore::erase(const std::string& key) {
  std::lock_guard lock(mu_);
  data_.erase(key);
  save_locked();
}

void PrivateStore::save_locked() {
  std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::trunc);
  if (!out) throw StoreUnavailable("cannot write " + file_.string());
  out << data_.dump() << "\n";
}

Query selection_query(const ModuleSpec& spec) {
  Query q;
  q.require_tags = spec.required_tags;
  if (spec.trigger_mode == TriggerMode::kTag) {
    q.require_tags.insert(for_tag(spec.name));
  } else {
    q.forbid_tags.insert(done_tag(spec.name));
  }
  q.forbid_tags.insert(failed_tag(spec.name));
  q.require_fields = spec.required_fields;
  q.limit = static_cast<std::size_t>(spec.max_items_per_run);
  return q;
}

RunReport run_module(Store& store, const ModuleSpec& spec,
                     const Routine& routine, PrivateStore& private_store,
                     const RunOptions& options) {
  Blackboard& input = store.open(spec.input_blackboard);
  Blackboard& output = store.open(spec.output_blackboard);

  RunReport report;
  report.module = spec.name;
  report.started_at = options.now ? options.now : now_wall();

  std::vector<Item> selected = input.query(selection_query(spec));
  report.items_selected = static_cast<int>(selected.size());

  std::atomic<size_t> next{0};
  std::atomic<int> succeeded{0};
  std::atomic<int> failed{0};
  std::atomic<bool> timed_out{false};

  auto past_deadline = [&] {
    return options.deadline &&
           std::chrono::steady_clock::now() >= *options.deadline;
  };

  auto process_one = [&](const Item& item) {
    try {
      Outcome out = routine(item, private_store);
      TagSet add = out.add_tags;
      add.insert(spec.emit_tags.begin(), spec.emit_tags.end());
      TagSet remove = out.remove_tags;
      remove.insert(for_tag(spec.name));
      input.apply(item.item_id, out.new_fields, out.annotations, add, remove);
      for (auto& draft : out.new_items) {
        Item fresh;
        fresh.fields = std::move(draft.fields);
        fresh.tags = std::move(draft.tags);
        fresh.created_at = options.now ? options.now : 0;
        output.insert(std::move(fresh));
      }
      succeeded.fetch_add(1);
    } catch (const std::exception&) {
      failed.fetch_add(1);
      int retries = 1;
      auto it = item.annotations.find(retry_key(spec.name));
      if (it != item.annotations.end() && it->is_number_integer()) {
        retries = it->get<int>() + 1;
      }
      json ann = json::object();
      ann[retry_key(spec.name)] = retries;
      TagSet add, remove;
      if (retries >= options.retry_cap) {
        add.insert(failed_tag(spec.name));
        remove.insert(for_tag(spec.name));
      }
      try {
        input.apply(item.item_id, ann, add, remove);
      } catch (const std::exception&) {
        // Item vanished mid-run; nothing more to record.
      }
    }
  };

  auto worker = [&] {
    while (true) {
      if (past_deadline()) {
        timed_out.store(true);
        return;
      }
      size_t i = next.fetch_add(1);
      if (i >= selected.size()) return;
      process_one(selected[i]);
    }
  };

  if (spec.threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    int n = std::min<int>(spec.threads, static_cast<int>(selected.size()));
    for (int i = 0; i < std::max(n, 1); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  report.items_succeeded = succeeded.load();
  report.items_failed = failed.load();
  report.timed_out = timed_out.load() || past_deadline();
  report.ended_at = options.now ? options.now : now_wall();
  return report;
}

void ModuleRegistry::add(ModuleSpec spec, Routine routine) {
  std::string name = spec.name;
  if (modules_.count(name)) throw DuplicateModule("module exists: " + name);
  modules_.emplace(name, std::make_pair(std::move(spec), std::move(routine)));
}

void ModuleRegistry::remove(const std::string& name) { modules_.erase(name); }

bool ModuleRegistry::has(const std::string& name) const {
  return modules_.count(name) > 0;
}

const ModuleSpec& ModuleRegistry::spec(const std::string& name) const {
  auto it = modules_.find(name);
  if (it == modules_.end()) throw UnknownModule("no module: " + name);
  return it->second.first;
}

const Routine& ModuleRegistry::routine(const std::string& name) const {
  auto it = modules_.find(name);
  if (it == modules_.end()) throw UnknownModule("no module: " + name);
  return it->second.second;
}

std::vector<std::string> ModuleRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, m] : modules_) out.push_back(name);
  return out;
}

}  // namespace newsdesk
