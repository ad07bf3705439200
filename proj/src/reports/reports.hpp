#pragma once

#include <limits>
#include <string>
#include <vector>

#include "store/blackboard.hpp"

namespace newsdesk {

// Half-open [begin, end) over an item's pub_date (created_at when absent).
struct DateRange {
  Timestamp begin = std::numeric_limits<Timestamp>::min();
  Timestamp end = std::numeric_limits<Timestamp>::max();

  bool contains(Timestamp t) const { return t >= begin && t < end; }
};

Timestamp item_time(const Item& item);

struct TopicAggregate {
  std::string topic;
  int article_count = 0;
  double mean_readability = 0.0;
  double stddev_readability = 0.0;
  double mean_subjectivity = 0.0;
  double stddev_subjectivity = 0.0;
};

struct MoodTimelinePoint {
  std::string date;  // YYYY-MM-DD, strictly increasing
  double volume_fraction = 0.0;  // tweets with score > 0 over all tweets
  double mean_score = 0.0;       // graded reading over all tweets that day
};

struct MoodTimeline {
  std::string mood;
  std::vector<MoodTimelinePoint> points;
};

struct OutletProfile {
  std::string outlet_id;
  int article_count = 0;
  std::map<std::string, double> topic_frequency;
  double mean_readability = 0.0;
  double mean_subjectivity = 0.0;
};

// One aggregate per topic tag present among the given topics, ordered by
// topic name. Articles carrying several topic tags contribute to each.
std::vector<TopicAggregate> topic_report(const Blackboard& articles,
                                         const DateRange& range,
                                         const std::vector<std::string>& topics);

// Daily volume fraction and mean score for one mood (annotation
// "mood.<mood>"). Days without tweets are omitted.
MoodTimeline mood_timeline(const Blackboard& tweets, const std::string& mood,
                           const DateRange& range,
                           const std::vector<std::string>& known_moods = {
                               "anger", "fear", "joy", "sadness"});

// Per-outlet topic coverage and writing style. With an empty outlet list,
// profiles every outlet present; an explicitly requested outlet with no
// articles in range is an error.
std::vector<OutletProfile> outlet_profiles(
    const Blackboard& articles, const std::vector<std::string>& outlet_ids,
    const DateRange& range, const std::vector<std::string>& topics);

struct StyleDistance {
  std::string outlet_a;
  std::string outlet_b;
  double distance = 0.0;  // Euclidean over z-scored [readability, subjectivity]
};

std::vector<StyleDistance> style_distances(
    const std::vector<OutletProfile>& profiles);

// Generic export surface: a typed report is a list of flat rows.
struct Report {
  std::string type;
  Timestamp generated_at = 0;
  std::vector<json> rows;
};

Report to_report(const std::vector<TopicAggregate>& aggs, Timestamp generated_at);
Report to_report(const MoodTimeline& timeline, Timestamp generated_at);
Report to_report(const std::vector<OutletProfile>& profiles,
                 Timestamp generated_at);
Report to_report(const std::vector<StyleDistance>& distances,
                 Timestamp generated_at);

// <report type=... generated_at=...> with one <row .../> per aggregate;
// attribute names match the row's field names. Byte-deterministic.
std::string export_xml(const Report& report);

// One structured record per row, same field names.
std::string export_ndjson(const Report& report);

// Reports land on the "reports" blackboard as ordinary items (created on
// first use); source blackboards are never mutated.
std::string write_report_item(Store& store, const Report& report);

}  // namespace newsdesk
