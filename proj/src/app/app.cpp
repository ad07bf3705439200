#include "app/app.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <sstream>

#include "annotators/annotators.hpp"
#include "annotators/routines.hpp"
#include "core/errors.hpp"
#include "ingest/feed.hpp"

namespace newsdesk {
namespace fs = std::filesystem;

namespace {

std::string read_file_or_empty(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_file_or_throw(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw StoreUnavailable("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw StoreUnavailable("cannot write " + path.string());
  out << content;
}

json load_json_or(const fs::path& path, json fallback) {
  std::ifstream in(path);
  if (!in) return fallback;
  json parsed = json::parse(in, nullptr, false);
  return parsed.is_discarded() ? fallback : parsed;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  for (const auto& t : parse_tag_list(csv)) out.push_back(t);
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  return out;
}

}  // namespace

App::App(fs::path root, bool create) : root_(std::move(root)), store_(root_) {
  if (create && !store_.exists("articles")) store_.init_standard();
  load_modules();
  load_state();
}

void App::load_modules() {
  fs::path dir = root_ / "modules";
  if (!fs::exists(dir)) return;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".conf") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    ModuleSpec spec = load_spec(read_file_or_throw(file));
    Routine routine = make_routine(spec);
    registry_.add(std::move(spec), std::move(routine));
  }
}

void App::load_state() {
  std::string schedule_doc = read_file_or_empty(root_ / "schedule.conf");
  if (!schedule_doc.empty()) {
    // Registered modules may have come and gone since the schedule was
    // written; a stale entry surfaces as a failing launch, not a load error.
    for (const auto& e : parse_schedule(schedule_doc)) {
      scheduler_.add(e, [](const std::string&) { return true; });
    }
  }
  json clock = load_json_or(root_ / "state" / "clock.json", json::object());
  virtual_now_ = clock.value("virtual_now", Timestamp{0});

  json hist =
      load_json_or(root_ / "state" / "schedule_state.json", json::object());
  std::map<std::string, Timestamp> launches;
  json launch_map = hist.value("last_launch", json::object());
  for (const auto& [module, t] : launch_map.items()) {
    launches[module] = t.get<Timestamp>();
  }
  scheduler_.set_launch_history(std::move(launches));

  json runs = load_json_or(root_ / "state" / "last_runs.json", json::object());
  for (const auto& [module, r] : runs.items()) {
    last_runs_[module] = RunReport::from_json(r);
  }
}

void App::save_state() {
  write_file(root_ / "state" / "clock.json",
             json{{"virtual_now", virtual_now_}}.dump() + "\n");
  json launches = json::object();
  for (const auto& [module, t] : scheduler_.launch_history()) {
    launches[module] = t;
  }
  write_file(root_ / "state" / "schedule_state.json",
             json{{"last_launch", launches}}.dump() + "\n");
  json runs = json::object();
  for (const auto& [module, r] : last_runs_) runs[module] = r.to_json();
  write_file(root_ / "state" / "last_runs.json", runs.dump() + "\n");
}

ModuleSpec App::register_module(const std::string& settings_document,
                                const std::string& base_dir) {
  SettingsMap kv = parse_settings(settings_document);
  // Resource paths are normalized at registration so later runs do not
  // depend on the CLI's working directory.
  for (auto& [key, value] : kv) {
    if (key.rfind("params.", 0) != 0 || value.empty()) continue;
    fs::path p(value);
    if (p.is_absolute()) continue;
    fs::path resolved = fs::path(base_dir) / p;
    if (fs::exists(resolved)) value = fs::absolute(resolved).string();
  }
  std::string normalized;
  for (const auto& [key, value] : kv) {
    normalized += key + " = " + value + "\n";
  }
  ModuleSpec spec = load_spec(normalized);
  Routine routine = make_routine(spec);
  registry_.add(spec, std::move(routine));
  write_file(root_ / "modules" / (spec.name + ".conf"), normalized);
  return spec;
}

void App::unregister_module(const std::string& name) {
  if (!registry_.has(name)) throw UnknownModule("no module: " + name);
  registry_.remove(name);
  fs::remove(root_ / "modules" / (name + ".conf"));
  privates_.erase(name);
}

void App::set_schedule(const std::string& schedule_document) {
  Scheduler fresh;
  for (const auto& e : parse_schedule(schedule_document)) {
    fresh.add(e, [this](const std::string& m) { return registry_.has(m); });
  }
  fresh.set_launch_history(scheduler_.launch_history());
  scheduler_ = std::move(fresh);
  write_file(root_ / "schedule.conf", schedule_document);
  save_state();
}

json App::ingest_manifest(const std::string& manifest_path) {
  fs::path manifest(manifest_path);
  std::string text = read_file_or_throw(manifest);
  fs::path base = manifest.parent_path();
  Timestamp now = virtual_now_ ? virtual_now_ : now_wall();

  json summary{{"feeds", 0},       {"articles_inserted", 0},
               {"duplicates", 0},  {"entries_skipped", 0},
               {"tweet_files", 0}, {"tweets_inserted", 0},
               {"tweets_duplicates", 0}, {"tweets_skipped", 0}};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (f[0] == "feed") {
      if (f.size() < 6) {
        throw ParseError("manifest line " + std::to_string(lineno) +
                         ": feed needs file, id, outlet, language, location");
      }
      FeedRecord feed;
      feed.source = (base / f[1]).string();
      feed.feed_id = f[2];
      feed.outlet_id = f[3];
      feed.language = f[4];
      feed.location = f[5];
      feed.approved = true;

      Blackboard& feeds = store_.open("feeds");
      Query q;
      q.require_fields = {"feed_id"};
      bool known = false;
      for (const auto& it : feeds.query(q)) {
        if (it.fields["feed_id"] == feed.feed_id) known = true;
      }
      if (!known) {
        Item record;
        record.fields = feed.to_fields();
        record.tags = {feed.feed_id};
        record.created_at = now;
        feeds.insert(std::move(record));
      }

      CrawlSummary s = crawl_feed_source(store_, feed, now);
      summary["feeds"] = summary["feeds"].get<int>() + 1;
      summary["articles_inserted"] =
          summary["articles_inserted"].get<int>() + s.inserted;
      summary["duplicates"] = summary["duplicates"].get<int>() + s.duplicates;
      summary["entries_skipped"] =
          summary["entries_skipped"].get<int>() + s.skipped;
    } else if (f[0] == "tweets") {
      if (f.size() < 2) {
        throw ParseError("manifest line " + std::to_string(lineno) +
                         ": tweets needs a file");
      }
      TagSet tags = f.size() > 2 ? parse_tag_list(f[2]) : TagSet{};
      auto s = ingest_tweets(store_, read_file_or_throw(base / f[1]), tags, now);
      summary["tweet_files"] = summary["tweet_files"].get<int>() + 1;
      summary["tweets_inserted"] =
          summary["tweets_inserted"].get<int>() + s.inserted;
      summary["tweets_duplicates"] =
          summary["tweets_duplicates"].get<int>() + s.duplicates;
      summary["tweets_skipped"] =
          summary["tweets_skipped"].get<int>() + s.skipped;
    } else {
      throw ParseError("manifest line " + std::to_string(lineno) +
                       ": unknown source kind '" + f[0] + "'");
    }
  }
  return summary;
}

void App::set_virtual_now(Timestamp t) {
  virtual_now_ = t;
  save_state();
}

PrivateStore& App::private_store(const std::string& module) {
  auto it = privates_.find(module);
  if (it == privates_.end()) {
    it = privates_
             .emplace(module, std::make_unique<PrivateStore>(
                                  root_ / "private" / (module + ".json"),
                                  module))
             .first;
  }
  return *it->second;
}

Scheduler::Runner App::runner() {
  return [this](const std::string& module, Timestamp now,
                double timeout_seconds) {
    const ModuleSpec& spec = registry_.spec(module);
    RunOptions opts;
    opts.now = now;
    if (timeout_seconds > 0.0) {
      opts.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(timeout_seconds));
    }
    RunReport report = run_module(store_, spec, registry_.routine(module),
                                  private_store(module), opts);
    last_runs_[module] = report;
    return report;
  };
}

std::vector<RunReport> App::tick() {
  Timestamp step = 0;
  for (const auto& e : scheduler_.entries()) {
    if (!e.enabled) continue;
    if (step == 0 || e.period_seconds < step) step = e.period_seconds;
  }
  if (step == 0) {
    save_state();
    return {};
  }
  return tick_at(virtual_now_ + step);
}

std::vector<RunReport> App::tick_at(Timestamp now) {
  virtual_now_ = now;
  std::vector<RunReport> reports = scheduler_.tick(virtual_now_, runner());
  save_state();
  return reports;
}

RunReport App::run_now(const std::string& module, double timeout_seconds) {
  RunReport report = runner()(module, virtual_now_, timeout_seconds);
  save_state();
  return report;
}

json App::build_idf() {
  json out = json::array();
  for (const auto& name : registry_.names()) {
    const ModuleSpec& spec = registry_.spec(name);
    if (spec.param("routine") != "features") continue;
    Lexicon stopwords = Lexicon::load(spec.param("stopwords"));
    std::vector<std::vector<std::string>> docs;
    for (const auto& item : store_.open(spec.input_blackboard).all()) {
      auto terms = prepare_terms(item_text(item), stopwords);
      if (!terms.empty()) docs.push_back(std::move(terms));
    }
    IdfTable table = build_idf_table(docs);
    private_store(name).put("idf", table.to_json());
    out.push_back(json{{"module", name},
                       {"documents", table.doc_count},
                       {"terms", static_cast<long long>(table.df.size())}});
  }
  return out;
}

std::vector<std::string> App::known_topics() const {
  std::vector<std::string> topics;
  for (const auto& name : registry_.names()) {
    std::string t = registry_.spec(name).param("topic");
    if (!t.empty()) topics.push_back(t);
  }
  std::sort(topics.begin(), topics.end());
  topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
  return topics;
}

std::vector<std::string> App::known_moods() const {
  std::vector<std::string> moods;
  for (const auto& name : registry_.names()) {
    for (const auto& [key, value] : registry_.spec(name).params) {
      if (key.rfind("lexicon.", 0) == 0) moods.push_back(key.substr(8));
    }
  }
  std::sort(moods.begin(), moods.end());
  moods.erase(std::unique(moods.begin(), moods.end()), moods.end());
  if (moods.empty()) moods = {"anger", "fear", "joy", "sadness"};
  return moods;
}

Report App::build_report(const std::string& type, const json& options) {
  DateRange range;
  if (options.contains("begin")) range.begin = options["begin"].get<Timestamp>();
  if (options.contains("end")) range.end = options["end"].get<Timestamp>();
  std::vector<std::string> topics =
      options.contains("topics") && !options["topics"].get<std::string>().empty()
          ? split_csv(options["topics"].get<std::string>())
          : known_topics();
  Timestamp generated_at = virtual_now_ ? virtual_now_ : now_wall();

  if (type == "topics") {
    return to_report(topic_report(store_.open("articles"), range, topics),
                     generated_at);
  }
  if (type == "mood_timeline") {
    std::string mood = options.value("mood", "joy");
    return to_report(
        mood_timeline(store_.open("tweets"), mood, range, known_moods()),
        generated_at);
  }
  if (type == "outlets" || type == "style_distances") {
    std::vector<std::string> outlets =
        options.contains("outlets")
            ? split_csv(options["outlets"].get<std::string>())
            : std::vector<std::string>{};
    auto profiles =
        outlet_profiles(store_.open("articles"), outlets, range, topics);
    if (type == "outlets") return to_report(profiles, generated_at);
    return to_report(style_distances(profiles), generated_at);
  }
  throw InvalidValue("unknown report type: " + type);
}

json App::status() const {
  json boards = json::object();
  for (const auto& name : store_.names()) {
    const Blackboard& bb = store_.open(name);
    json tags = json::object();
    for (const auto& [tag, count] : bb.list_tags()) {
      tags[tag] = count;
    }
    boards[name] = json{{"items", bb.count()}, {"tags", tags}};
  }

  json modules = json::object();
  for (const auto& name : registry_.names()) {
    const ModuleSpec& spec = registry_.spec(name);
    Query q = selection_query(spec);
    q.limit = std::numeric_limits<std::size_t>::max();
    json m{{"input_blackboard", spec.input_blackboard},
           {"trigger_mode",
            spec.trigger_mode == TriggerMode::kScan ? "scan" : "tag"},
           {"pending_items", store_.open(spec.input_blackboard).query(q).size()}};
    auto lr = last_runs_.find(name);
    if (lr != last_runs_.end()) m["last_run"] = lr->second.to_json();
    if (auto due = scheduler_.next_due(name, virtual_now_)) {
      m["next_due"] = *due;
    }
    modules[name] = std::move(m);
  }

  json schedule = json::array();
  for (const auto& e : scheduler_.entries()) {
    schedule.push_back(json{{"module", e.module},
                            {"period_seconds", e.period_seconds},
                            {"offset_seconds", e.offset_seconds},
                            {"timeout_seconds", e.timeout_seconds},
                            {"enabled", e.enabled}});
  }

  return json{{"virtual_now", virtual_now_},
              {"blackboards", boards},
              {"modules", modules},
              {"schedule", schedule}};
}

}  // namespace newsdesk
