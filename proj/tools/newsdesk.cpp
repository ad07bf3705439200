#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "app/app.hpp"
#include "core/errors.hpp"

using namespace newsdesk;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StoreUnavailable("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_reports(const std::vector<RunReport>& reports, bool as_json) {
  if (as_json) {
    json out = json::array();
    for (const auto& r : reports) out.push_back(r.to_json());
    std::cout << out.dump() << "\n";
    return;
  }
  for (const auto& r : reports) {
    std::cout << r.module << ": selected " << r.items_selected << ", ok "
              << r.items_succeeded << ", failed " << r.items_failed
              << (r.timed_out ? ", TIMED OUT" : "") << "\n";
  }
}

void print_status(const json& s, bool as_json) {
  if (as_json) {
    std::cout << s.dump() << "\n";
    return;
  }
  std::cout << "virtual time: " << s["virtual_now"].get<Timestamp>() << "\n";
  std::cout << "blackboards:\n";
  for (const auto& [name, bb] : s["blackboards"].items()) {
    std::cout << "  " << name << ": " << bb["items"].get<std::size_t>()
              << " items";
    std::string tags;
    for (const auto& [tag, count] : bb["tags"].items()) {
      if (!tags.empty()) tags += ", ";
      tags += tag + "=" + std::to_string(count.get<std::size_t>());
    }
    if (!tags.empty()) std::cout << " (" << tags << ")";
    std::cout << "\n";
  }
  std::cout << "modules:\n";
  for (const auto& [name, m] : s["modules"].items()) {
    std::cout << "  " << name << " [" << m["trigger_mode"].get<std::string>()
              << " on " << m["input_blackboard"].get<std::string>()
              << "], pending " << m["pending_items"].get<std::size_t>();
    if (m.contains("last_run")) {
      const json& r = m["last_run"];
      std::cout << ", last run ok " << r["items_succeeded"].get<int>()
                << "/" << r["items_selected"].get<int>();
      if (r["timed_out"].get<bool>()) std::cout << " TIMED OUT";
    }
    if (m.contains("next_due")) {
      std::cout << ", next due " << m["next_due"].get<Timestamp>();
    }
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"newsdesk - blackboard-coordinated news analysis"};
  cli.require_subcommand(1);

  std::string store_path = "store";
  bool as_json = false;
  cli.add_option("--store", store_path, "Store directory")
      ->capture_default_str();
  cli.add_flag("--json", as_json, "Machine-readable output");

  auto* init = cli.add_subcommand("init", "Create a store with the standard blackboards");

  std::vector<std::string> settings_files;
  auto* reg = cli.add_subcommand("register", "Register module settings files");
  reg->add_option("files", settings_files, "Settings files")->required();

  std::string unregister_name;
  reg->add_option("--remove", unregister_name,
                  "Unregister this module instead of adding files")
      ->excludes(reg->get_option("files"));
  reg->get_option("files")->required(false);

  std::string schedule_file;
  auto* sched = cli.add_subcommand("schedule", "Install the schedule table");
  sched->add_option("file", schedule_file, "Schedule file")->required();

  std::string manifest_path;
  auto* ingest = cli.add_subcommand("ingest", "Crawl every source in a manifest");
  ingest->add_option("manifest", manifest_path, "Manifest file")->required();

  int tick_count = 1;
  Timestamp start_time = -1;
  auto* tick = cli.add_subcommand("tick", "Advance virtual time and run due modules");
  tick->add_option("--count", tick_count, "Number of ticks")
      ->capture_default_str();
  tick->add_option("--start", start_time, "Set the virtual clock first");

  std::string run_module_name;
  bool wall_clock = false;
  double run_duration = 0.0;
  double run_timeout = 0.0;
  auto* run = cli.add_subcommand("run", "Run one module now, or drive the schedule on the wall clock");
  run->add_option("module", run_module_name, "Module to launch immediately");
  run->add_flag("--wall-clock", wall_clock, "Loop the scheduler on real time");
  run->add_option("--duration", run_duration,
                  "Wall-clock seconds to keep looping (0 = forever)");
  run->add_option("--timeout", run_timeout, "Timeout for an immediate run");

  auto* status = cli.add_subcommand("status", "Show blackboards, modules and schedule");

  std::string report_type = "topics";
  std::string report_format = "xml";
  std::string out_path;
  std::string opt_topics, opt_mood = "joy", opt_outlets;
  Timestamp opt_begin = -1, opt_end = -1;
  bool no_record = false;
  auto* exp = cli.add_subcommand("export", "Build a report and write the document");
  exp->add_option("--type", report_type,
                  "topics | mood_timeline | outlets | style_distances")
      ->capture_default_str();
  exp->add_option("--format", report_format, "xml | ndjson")
      ->capture_default_str();
  exp->add_option("--out", out_path, "Output file (default stdout)");
  exp->add_option("--topics", opt_topics, "Comma-separated topic tags");
  exp->add_option("--mood", opt_mood, "Mood for the timeline")
      ->capture_default_str();
  exp->add_option("--outlets", opt_outlets, "Comma-separated outlet ids");
  exp->add_option("--begin", opt_begin, "Range start (unix seconds, inclusive)");
  exp->add_option("--end", opt_end, "Range end (unix seconds, exclusive)");
  exp->add_flag("--no-record", no_record,
                "Skip writing the report to the reports blackboard");

  auto* idf = cli.add_subcommand("build-idf", "Rebuild document frequencies for feature extraction");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (init->parsed()) {
      App app(store_path, /*create=*/true);
      if (as_json) {
        std::cout << json{{"store", store_path},
                          {"blackboards", app.store().names()}}.dump()
                  << "\n";
      } else {
        std::cout << "initialized " << store_path << " with "
                  << app.store().names().size() << " blackboards\n";
      }
      return 0;
    }

    App app(store_path);

    if (reg->parsed()) {
      if (!unregister_name.empty()) {
        app.unregister_module(unregister_name);
        if (!as_json) std::cout << "unregistered " << unregister_name << "\n";
        return 0;
      }
      if (settings_files.empty()) {
        std::cerr << "error: no settings files given\n";
        return 1;
      }
      json names = json::array();
      for (const auto& file : settings_files) {
        std::string base =
            std::filesystem::path(file).parent_path().string();
        ModuleSpec spec = app.register_module(read_file(file), base);
        names.push_back(spec.name);
        if (!as_json) std::cout << "registered " << spec.name << "\n";
      }
      if (as_json) std::cout << json{{"registered", names}}.dump() << "\n";
    } else if (sched->parsed()) {
      app.set_schedule(read_file(schedule_file));
      if (as_json) {
        std::cout << json{{"entries", app.scheduler().entries().size()}}.dump()
                  << "\n";
      } else {
        std::cout << "schedule installed, "
                  << app.scheduler().entries().size() << " entries\n";
      }
    } else if (ingest->parsed()) {
      json summary = app.ingest_manifest(manifest_path);
      if (as_json) {
        std::cout << summary.dump() << "\n";
      } else {
        std::cout << summary["articles_inserted"].get<int>() << " inserted, "
                  << summary["duplicates"].get<int>() << " duplicates, "
                  << summary["tweets_inserted"].get<int>() << " tweets\n";
      }
    } else if (tick->parsed()) {
      if (start_time >= 0) app.set_virtual_now(start_time);
      std::vector<RunReport> all;
      for (int i = 0; i < tick_count; ++i) {
        auto reports = app.tick();
        all.insert(all.end(), reports.begin(), reports.end());
      }
      print_reports(all, as_json);
    } else if (run->parsed()) {
      if (!run_module_name.empty()) {
        print_reports({app.run_now(run_module_name, run_timeout)}, as_json);
      } else if (wall_clock) {
        Timestamp until =
            run_duration > 0.0
                ? now_wall() + static_cast<Timestamp>(run_duration)
                : std::numeric_limits<Timestamp>::max();
        while (now_wall() < until) {
          print_reports(app.tick_at(now_wall()), as_json);
          std::this_thread::sleep_for(std::chrono::seconds(1));
        }
      } else {
        std::cerr << "error: give a module name or --wall-clock\n";
        return 1;
      }
    } else if (status->parsed()) {
      print_status(app.status(), as_json);
    } else if (exp->parsed()) {
      json options = json::object();
      if (!opt_topics.empty()) options["topics"] = opt_topics;
      if (!opt_outlets.empty()) options["outlets"] = opt_outlets;
      options["mood"] = opt_mood;
      if (opt_begin >= 0) options["begin"] = opt_begin;
      if (opt_end >= 0) options["end"] = opt_end;

      Report report = app.build_report(report_type, options);
      std::string doc;
      if (report_format == "xml") {
        doc = export_xml(report);
      } else if (report_format == "ndjson") {
        doc = export_ndjson(report);
      } else {
        std::cerr << "error: unknown format " << report_format << "\n";
        return 1;
      }
      if (!no_record) write_report_item(app.store(), report);
      if (out_path.empty()) {
        std::cout << doc;
      } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw StoreUnavailable("cannot write " + out_path);
        out << doc;
        if (!as_json) {
          std::cout << "wrote " << report.rows.size() << " rows to "
                    << out_path << "\n";
        }
      }
    } else if (idf->parsed()) {
      json summary = app.build_idf();
      if (as_json) {
        std::cout << summary.dump() << "\n";
      } else {
        for (const auto& entry : summary) {
          std::cout << entry["module"].get<std::string>() << ": "
                    << entry["documents"].get<long long>() << " documents, "
                    << entry["terms"].get<long long>() << " terms\n";
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
