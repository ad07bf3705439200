#include "ingest/feed.hpp"

#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "store/hash.hpp"
#include "text/markup.hpp"

namespace newsdesk {

json FeedRecord::to_fields() const {
  return json{{"feed_id", feed_id},     {"url", source},
              {"outlet_id", outlet_id}, {"language", language},
              {"location", location},   {"approved", approved}};
}

FeedRecord FeedRecord::from_item(const Item& item) {
  FeedRecord r;
  r.feed_id = item.fields.value("feed_id", "");
  r.source = item.fields.value("url", "");
  r.outlet_id = item.fields.value("outlet_id", "");
  r.language = item.fields.value("language", "");
  r.location = item.fields.value("location", "");
  r.approved = item.fields.value("approved", false);
  return r;
}

namespace {

FeedEntry parse_rss_item(const MarkupNode& item) {
  FeedEntry e;
  e.title = item.child_text("title");
  e.description = item.child_text("description");
  e.link = item.child_text("link");
  std::string date = item.child_text("pubdate");
  if (!date.empty()) e.pub_date = parse_datetime(date);
  return e;
}

FeedEntry parse_atom_entry(const MarkupNode& entry) {
  FeedEntry e;
  e.title = entry.child_text("title");
  e.description = entry.child_text("summary");
  if (e.description.empty()) e.description = entry.child_text("content");
  for (const auto& c : entry.children) {
    if (c.name == "link") {
      std::string rel = c.attr("rel");
      if (rel.empty() || rel == "alternate") {
        e.link = c.attr("href");
        break;
      }
    }
  }
  std::string date = entry.child_text("updated");
  if (date.empty()) date = entry.child_text("published");
  if (!date.empty()) e.pub_date = parse_datetime(date);
  return e;
}

}  // namespace

ParsedFeed parse_feed(const std::string& xml) {
  MarkupNode root = parse_xml(xml);
  ParsedFeed out;

  const MarkupNode* rss = root.child("rss");
  const MarkupNode* channel =
      rss ? rss->child("channel") : root.child("channel");
  if (channel) {
    out.title = channel->child_text("title");
    for (const auto& c : channel->children) {
      if (c.name != "item") continue;
      FeedEntry e = parse_rss_item(c);
      if (e.title.empty() && e.link.empty()) {
        ++out.skipped;
      } else {
        out.entries.push_back(std::move(e));
      }
    }
    return out;
  }

  const MarkupNode* feed = root.child("feed");
  if (feed) {
    out.title = feed->child_text("title");
    for (const auto& c : feed->children) {
      if (c.name != "entry") continue;
      FeedEntry e = parse_atom_entry(c);
      if (e.title.empty() && e.link.empty()) {
        ++out.skipped;
      } else {
        out.entries.push_back(std::move(e));
      }
    }
    return out;
  }

  throw MalformedFeed("document is neither RSS 2.0 nor Atom 1.0");
}

CrawlSummary crawl_feed(Store& store, const FeedRecord& feed,
                        const std::string& feed_document, Timestamp now) {
  if (!feed.approved) {
    throw InvalidValue("feed not approved: " + feed.feed_id);
  }
  ParsedFeed parsed = parse_feed(feed_document);
  Blackboard& articles = store.open("articles");

  CrawlSummary summary;
  summary.skipped = parsed.skipped;
  for (const auto& entry : parsed.entries) {
    Item item;
    item.fields["title"] = entry.title;
    item.fields["description"] = entry.description;
    if (!entry.link.empty()) item.fields["link"] = entry.link;
    item.fields["outlet_id"] = feed.outlet_id;
    item.fields["feed_ids"] = json::array({feed.feed_id});
    item.created_at = now;

    TagSet tags = {feed.feed_id};
    if (entry.pub_date) {
      item.fields["pub_date"] = *entry.pub_date;
    } else {
      item.fields["pub_date"] = now;
      tags.insert("date.fallback");
    }
    if (!feed.language.empty()) tags.insert(feed.language);
    if (!feed.location.empty()) {
      tags.insert(feed.location);
      item.fields["location"] = feed.location;
    }
    if (!entry.link.empty()) tags.insert(for_tag("Scraper"));
    if (!feed.language.empty() && feed.language != "en") {
      tags.insert(for_tag("Translator"));
    }
    item.tags = tags;
    item.dedup_hash =
        compute_dedup_hash(entry.title, entry.description, feed.outlet_id);

    InsertResult r = articles.insert(std::move(item));
    if (r.inserted) {
      ++summary.inserted;
    } else {
      ++summary.duplicates;
      // Second feed carrying the same article: add what it brings.
      json extras;
      extras["feed_ids"] = json::array({feed.feed_id});
      if (!entry.link.empty()) extras["link"] = entry.link;
      articles.merge(r.item_id, extras, {feed.feed_id});
    }
  }
  return summary;
}

CrawlSummary crawl_feed_source(Store& store, const FeedRecord& feed,
                               Timestamp now) {
  std::ifstream in(feed.source);
  if (!in) throw FetchError("cannot read feed source: " + feed.source);
  std::ostringstream buf;
  buf << in.rdbuf();
  return crawl_feed(store, feed, buf.str(), now);
}

TweetIngestSummary ingest_tweets(Store& store, const std::string& ndjson,
                                 const TagSet& extra_tags, Timestamp now) {
  Blackboard& tweets = store.open("tweets");
  TweetIngestSummary summary;
  std::istringstream in(ndjson);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.contains("text")) {
      ++summary.skipped;
      continue;
    }
    Item item;
    item.fields["content"] = doc["text"];
    if (doc.contains("timestamp")) {
      if (doc["timestamp"].is_number()) {
        item.fields["pub_date"] = doc["timestamp"];
      } else {
        auto t = parse_datetime(doc["timestamp"].get<std::string>());
        item.fields["pub_date"] = t ? *t : now;
      }
    } else {
      item.fields["pub_date"] = now;
    }
    item.created_at = now;
    item.tags = extra_tags;
    std::string city;
    if (doc.contains("city")) {
      city = doc["city"].get<std::string>();
      item.fields["city"] = city;
      item.tags.insert(city);
    }
    // Re-ingesting the same file must not duplicate the corpus.
    item.dedup_hash = compute_dedup_hash(
        doc["text"].get<std::string>(),
        std::to_string(item.fields["pub_date"].get<Timestamp>()), city);
    if (tweets.insert(std::move(item)).inserted) {
      ++summary.inserted;
    } else {
      ++summary.duplicates;
    }
  }
  return summary;
}

}  // namespace newsdesk
