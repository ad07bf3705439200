#include "ingest/scrape.hpp"

#include <algorithm>
#include <set>

#include "text/markup.hpp"
#include "text/tokenize.hpp"

namespace newsdesk {
namespace {

const std::set<std::string> kBlockElements = {
    "article", "blockquote", "body", "div", "li",
    "main",    "p",          "section", "td"};

size_t link_text_length(const MarkupNode& node) {
  if (node.is_text()) return 0;
  if (node.name == "a") return node.all_text().size();
  size_t total = 0;
  for (const auto& c : node.children) total += link_text_length(c);
  return total;
}

void best_block(const MarkupNode& node, double& best_score,
                const MarkupNode*& best) {
  if (!node.is_text() && kBlockElements.count(node.name)) {
    double text_len = static_cast<double>(normalize_ws(node.all_text()).size());
    double link_len = static_cast<double>(link_text_length(node));
    double score = text_len - 3.0 * link_len;
    // Strictly-greater keeps the outermost block on ties (pre-order walk).
    if (score > best_score) {
      best_score = score;
      best = &node;
    }
  }
  for (const auto& c : node.children) best_block(c, best_score, best);
}

bool looks_like_feed_href(const std::string& href) {
  std::string h = to_lower_ascii(href);
  auto ends_with = [&](const char* suffix) {
    size_t n = std::char_traits<char>::length(suffix);
    return h.size() >= n && h.compare(h.size() - n, n, suffix) == 0;
  };
  return ends_with(".rss") || ends_with(".xml") ||
         h.find("atom") != std::string::npos;
}

std::string host_of(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) return "";
  auto end = url.find('/', scheme + 3);
  return url.substr(scheme + 3,
                    end == std::string::npos ? std::string::npos
                                             : end - scheme - 3);
}

}  // namespace

std::string scrape_html(const std::string& html) {
  MarkupNode root = parse_markup(html);
  double best_score = -1e18;
  const MarkupNode* best = nullptr;
  best_block(root, best_score, best);
  if (!best) {
    // No block elements; fall back to whatever text the document has.
    return normalize_ws(root.all_text());
  }
  return normalize_ws(best->all_text());
}

std::string resolve_url(const std::string& base, const std::string& href) {
  if (href.find("://") != std::string::npos) return href;
  auto scheme = base.find("://");
  if (scheme == std::string::npos) return href;
  if (href.empty()) return base;
  std::string origin;
  auto path_start = base.find('/', scheme + 3);
  origin = path_start == std::string::npos ? base : base.substr(0, path_start);
  if (href[0] == '/') return origin + href;
  // Relative to the base document's directory.
  std::string dir =
      path_start == std::string::npos ? base + "/" : base.substr(0, base.rfind('/') + 1);
  return dir + href;
}

std::vector<FeedRecord> find_feeds(const std::string& page_html,
                                   const std::string& base_url) {
  MarkupNode root = parse_markup(page_html);
  std::vector<FeedRecord> out;
  std::set<std::string> seen;

  auto add = [&](const std::string& href) {
    if (href.empty()) return;
    std::string url = resolve_url(base_url, href);
    if (!seen.insert(url).second) return;
    FeedRecord r;
    r.source = url;
    r.feed_id = url;
    r.outlet_id = host_of(url);
    r.approved = false;  // human gate
    out.push_back(std::move(r));
  };

  std::vector<const MarkupNode*> links;
  root.find_all("link", links);
  for (const auto* link : links) {
    std::string type = to_lower_ascii(link->attr("type"));
    if (to_lower_ascii(link->attr("rel")) == "alternate" &&
        (type == "application/rss+xml" || type == "application/atom+xml")) {
      add(link->attr("href"));
    }
  }
  std::vector<const MarkupNode*> anchors;
  root.find_all("a", anchors);
  for (const auto* a : anchors) {
    std::string href = a->attr("href");
    if (looks_like_feed_href(href)) add(href);
  }
  return out;
}

int register_feed_candidates(Store& store,
                             const std::vector<FeedRecord>& candidates,
                             Timestamp now) {
  Blackboard& feeds = store.open("feeds");
  std::set<std::string> existing;
  for (const auto& item : feeds.all()) {
    existing.insert(item.fields.value("url", ""));
  }
  int added = 0;
  for (const auto& c : candidates) {
    if (existing.count(c.source)) continue;
    Item item;
    item.fields = c.to_fields();
    item.fields["approved"] = false;
    item.created_at = now;
    item.tags = {"candidate"};
    feeds.insert(std::move(item));
    existing.insert(c.source);
    ++added;
  }
  return added;
}

}  // namespace newsdesk
