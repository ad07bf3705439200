#pragma once

#include <optional>
#include <string>
#include <vector>

#include "store/blackboard.hpp"

namespace newsdesk {

struct FeedRecord {
  std::string feed_id;
  std::string source;  // URL or local file path
  std::string outlet_id;
  std::string language;  // declared language, may be empty
  std::string location;  // outlet location, may be empty
  bool approved = false;

  json to_fields() const;
  static FeedRecord from_item(const Item& item);
};

struct OutletRecord {
  std::string outlet_id;  // the website domain name
  std::string domain;
  std::string display_name;
  std::string location;
};

struct FeedEntry {
  std::string title;
  std::string description;
  std::string link;
  std::optional<Timestamp> pub_date;
};

struct ParsedFeed {
  std::string title;
  std::vector<FeedEntry> entries;
  int skipped = 0;  // entries with neither title nor link
};

// RSS 2.0 or Atom 1.0 (subset). Throws MalformedFeed when the document has
// no channel/feed element at all; bad entries are skipped and counted.
ParsedFeed parse_feed(const std::string& xml);

struct CrawlSummary {
  int inserted = 0;
  int duplicates = 0;
  int skipped = 0;
};

// Turns every feed entry into an article item: dedup-inserted, tagged with
// the declared language, outlet location, feed id, and the scraper /
// translator triggers. A duplicate from a second feed merges its extras
// into the existing article.
CrawlSummary crawl_feed(Store& store, const FeedRecord& feed,
                        const std::string& feed_document, Timestamp now);

// Reads feed.source as a local file. FetchError when unreadable.
CrawlSummary crawl_feed_source(Store& store, const FeedRecord& feed,
                               Timestamp now);

struct TweetIngestSummary {
  int inserted = 0;
  int duplicates = 0;
  int skipped = 0;
};

// Newline-delimited JSON documents with text/timestamp/city fields, written
// to the tweets blackboard through the normal insert path.
TweetIngestSummary ingest_tweets(Store& store, const std::string& ndjson,
                                 const TagSet& extra_tags, Timestamp now);

}  // namespace newsdesk
