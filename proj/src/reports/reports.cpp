#include "reports/reports.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace newsdesk {
namespace {

struct Welford {
  // Two-pass is overkill; sums are fine at this scale.
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double stddev() const {
    if (n == 0) return 0.0;
    double m = mean();
    double var = sum_sq / n - m * m;
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

std::optional<double> annotation_number(const Item& it, const std::string& key) {
  auto node = it.annotations.find(key);
  if (node == it.annotations.end() || !node->is_number()) return std::nullopt;
  return node->get<double>();
}

std::vector<Item> in_range(const Blackboard& bb, const DateRange& range) {
  std::vector<Item> out;
  for (auto& it : bb.all()) {
    if (range.contains(item_time(it))) out.push_back(std::move(it));
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string value_repr(const json& v) {
  // nlohmann's shortest-round-trip number printing keeps exports
  // byte-deterministic for identical inputs.
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

Timestamp item_time(const Item& item) {
  auto pd = item.fields.find("pub_date");
  if (pd != item.fields.end() && pd->is_number()) {
    return pd->get<Timestamp>();
  }
  return item.created_at;
}

std::vector<TopicAggregate> topic_report(
    const Blackboard& articles, const DateRange& range,
    const std::vector<std::string>& topics) {
  std::vector<Item> items = in_range(articles, range);

  std::vector<std::string> sorted = topics;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<TopicAggregate> out;
  for (const auto& topic : sorted) {
    TopicAggregate agg;
    agg.topic = topic;
    Welford read, subj;
    for (const auto& it : items) {
      if (!it.has_tag(topic)) continue;
      ++agg.article_count;
      if (auto r = annotation_number(it, "readability")) read.add(*r);
      if (auto s = annotation_number(it, "subjectivity")) subj.add(*s);
    }
    if (agg.article_count == 0) continue;
    agg.mean_readability = read.mean();
    agg.stddev_readability = read.stddev();
    agg.mean_subjectivity = subj.mean();
    agg.stddev_subjectivity = subj.stddev();
    out.push_back(std::move(agg));
  }
  return out;
}

MoodTimeline mood_timeline(const Blackboard& tweets, const std::string& mood,
                           const DateRange& range,
                           const std::vector<std::string>& known_moods) {
  if (std::find(known_moods.begin(), known_moods.end(), mood) ==
      known_moods.end()) {
    throw UnknownMood("no such mood: " + mood);
  }
  const std::string key = "mood." + mood;

  struct Day {
    int total = 0;
    int positive = 0;
    double sum = 0.0;
  };
  std::map<std::string, Day> days;  // keyed by date, so already sorted
  for (const auto& it : in_range(tweets, range)) {
    Day& d = days[utc_date(item_time(it))];
    ++d.total;
    double score = annotation_number(it, key).value_or(0.0);
    d.sum += score;
    if (score > 0.0) ++d.positive;
  }

  MoodTimeline out;
  out.mood = mood;
  for (const auto& [date, d] : days) {
    MoodTimelinePoint p;
    p.date = date;
    p.volume_fraction = static_cast<double>(d.positive) / d.total;
    p.mean_score = d.sum / d.total;
    out.points.push_back(std::move(p));
  }
  return out;
}

std::vector<OutletProfile> outlet_profiles(
    const Blackboard& articles, const std::vector<std::string>& outlet_ids,
    const DateRange& range, const std::vector<std::string>& topics) {
  std::map<std::string, std::vector<const Item*>> by_outlet;
  std::vector<Item> items = in_range(articles, range);
  for (const auto& it : items) {
    std::string outlet = it.fields.value("outlet_id", "");
    if (outlet.empty()) continue;
    by_outlet[outlet].push_back(&it);
  }

  std::vector<std::string> wanted = outlet_ids;
  if (wanted.empty()) {
    for (const auto& [outlet, _] : by_outlet) wanted.push_back(outlet);
  } else {
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  }

  std::vector<OutletProfile> out;
  for (const auto& outlet : wanted) {
    auto found = by_outlet.find(outlet);
    if (found == by_outlet.end()) {
      throw UnknownOutlet("no articles for outlet: " + outlet);
    }
    OutletProfile p;
    p.outlet_id = outlet;
    p.article_count = static_cast<int>(found->second.size());
    Welford read, subj;
    for (const Item* it : found->second) {
      if (auto r = annotation_number(*it, "readability")) read.add(*r);
      if (auto s = annotation_number(*it, "subjectivity")) subj.add(*s);
      for (const auto& topic : topics) {
        if (it->has_tag(topic)) p.topic_frequency[topic] += 1.0;
      }
    }
    for (auto& [_, freq] : p.topic_frequency) freq /= p.article_count;
    p.mean_readability = read.mean();
    p.mean_subjectivity = subj.mean();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<StyleDistance> style_distances(
    const std::vector<OutletProfile>& profiles) {
  Welford read, subj;
  for (const auto& p : profiles) {
    read.add(p.mean_readability);
    subj.add(p.mean_subjectivity);
  }
  auto zscore = [](double x, const Welford& w) {
    return w.stddev() > 0.0 ? (x - w.mean()) / w.stddev() : 0.0;
  };

  std::vector<StyleDistance> out;
  for (size_t i = 0; i < profiles.size(); ++i) {
    for (size_t j = i + 1; j < profiles.size(); ++j) {
      StyleDistance d;
      d.outlet_a = profiles[i].outlet_id;
      d.outlet_b = profiles[j].outlet_id;
      double dr = zscore(profiles[i].mean_readability, read) -
                  zscore(profiles[j].mean_readability, read);
      double ds = zscore(profiles[i].mean_subjectivity, subj) -
                  zscore(profiles[j].mean_subjectivity, subj);
      d.distance = std::sqrt(dr * dr + ds * ds);
      out.push_back(std::move(d));
    }
  }
  return out;
}

Report to_report(const std::vector<TopicAggregate>& aggs,
                 Timestamp generated_at) {
  Report r{"topics", generated_at, {}};
  for (const auto& a : aggs) {
    r.rows.push_back(json{{"topic", a.topic},
                          {"article_count", a.article_count},
                          {"mean_readability", a.mean_readability},
                          {"stddev_readability", a.stddev_readability},
                          {"mean_subjectivity", a.mean_subjectivity},
                          {"stddev_subjectivity", a.stddev_subjectivity}});
  }
  return r;
}

Report to_report(const MoodTimeline& timeline, Timestamp generated_at) {
  Report r{"mood_timeline", generated_at, {}};
  for (const auto& p : timeline.points) {
    r.rows.push_back(json{{"date", p.date},
                          {"mood", timeline.mood},
                          {"volume_fraction", p.volume_fraction},
                          {"mean_score", p.mean_score}});
  }
  return r;
}

Report to_report(const std::vector<OutletProfile>& profiles,
                 Timestamp generated_at) {
  Report r{"outlets", generated_at, {}};
  for (const auto& p : profiles) {
    json row{{"outlet_id", p.outlet_id},
             {"article_count", p.article_count},
             {"mean_readability", p.mean_readability},
             {"mean_subjectivity", p.mean_subjectivity}};
    for (const auto& [topic, freq] : p.topic_frequency) {
      row["topic." + topic] = freq;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report to_report(const std::vector<StyleDistance>& distances,
                 Timestamp generated_at) {
  Report r{"style_distances", generated_at, {}};
  for (const auto& d : distances) {
    r.rows.push_back(json{{"outlet_a", d.outlet_a},
                          {"outlet_b", d.outlet_b},
                          {"distance", d.distance}});
  }
  return r;
}

std::string export_xml(const Report& report) {
  std::string out = "<report type=\"" + xml_escape(report.type) +
                    "\" generated_at=\"" + format_iso8601(report.generated_at) +
                    "\">\n";
  for (const auto& row : report.rows) {
    out += "  <row";
    // nlohmann::json objects iterate in key order, so attribute order is
    // stable for identical inputs.
    for (const auto& [key, value] : row.items()) {
      out += " " + key + "=\"" + xml_escape(value_repr(value)) + "\"";
    }
    out += "/>\n";
  }
  out += "</report>\n";
  return out;
}

std::string export_ndjson(const Report& report) {
  std::string out;
  for (const auto& row : report.rows) {
    json line = row;
    line["report_type"] = report.type;
    out += line.dump() + "\n";
  }
  return out;
}

std::string write_report_item(Store& store, const Report& report) {
  Blackboard& reports =
      store.exists("reports") ? store.open("reports") : store.create("reports");
  Item item;
  item.fields["type"] = report.type;
  item.fields["generated_at"] = report.generated_at;
  item.fields["rows"] = report.rows;
  item.tags = {report.type};
  item.created_at = report.generated_at;
  return reports.insert(std::move(item)).item_id;
}

}  // namespace newsdesk
