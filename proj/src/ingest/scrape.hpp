#pragma once

#include <string>
#include <vector>

#include "ingest/feed.hpp"

namespace newsdesk {

// Main-text extraction: picks the block element maximizing
// text length - 3 * link-text length, returns its whitespace-normalized
// text. Empty string when the page has no text at all.
std::string scrape_html(const std::string& html);

// Feed autodiscovery from <link rel="alternate"> headers and anchors whose
// href looks like a feed. Candidates always come back approved=false.
std::vector<FeedRecord> find_feeds(const std::string& page_html,
                                   const std::string& base_url);

// Minimal relative-reference resolution against an absolute base URL.
std::string resolve_url(const std::string& base, const std::string& href);

// Writes candidates to the feeds blackboard, skipping URLs already present.
// Returns the number of new records.
int register_feed_candidates(Store& store,
                             const std::vector<FeedRecord>& candidates,
                             Timestamp now);

}  // namespace newsdesk
