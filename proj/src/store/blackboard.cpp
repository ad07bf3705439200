#include "store/blackboard.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

namespace newsdesk {
namespace fs = std::filesystem;

namespace {

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

std::string format_id(std::uint64_t seq) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%010llu",
                static_cast<unsigned long long>(seq));
  return buf;
}

// feed_ids is a list field that merges by union instead of first-writer-wins.
void union_list_field(json& dst, const json& extra) {
  for (const auto& v : extra) {
    if (std::find(dst.begin(), dst.end(), v) == dst.end()) {
      dst.push_back(v);
    }
  }
}

}  // namespace

Blackboard::Blackboard(fs::path dir, std::string name, bool dedup, bool create)
    : dir_(std::move(dir)), name_(std::move(name)), dedup_(dedup) {
  if (create) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw StoreUnavailable("cannot create " + dir_.string());
    std::ofstream meta(dir_ / "meta.json");
    meta << json{{"name", name_}, {"dedup", dedup_}}.dump() << "\n";
    persist_locked();
    return;
  }
  std::ifstream meta(dir_ / "meta.json");
  if (meta) {
    json m = json::parse(meta, nullptr, false);
    if (!m.is_discarded()) dedup_ = m.value("dedup", false);
  }
  std::ifstream in(dir_ / "items.ndjson");
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    Item it = Item::from_json(json::parse(line));
    if (!it.dedup_hash.empty()) by_hash_[it.dedup_hash] = it.item_id;
    std::uint64_t seq = std::strtoull(it.item_id.c_str(), nullptr, 10);
    next_seq_ = std::max(next_seq_, seq + 1);
    items_.emplace(it.item_id, std::move(it));
  }
}

void Blackboard::persist_locked() {
  fs::path tmp = dir_ / "items.ndjson.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw StoreUnavailable("cannot write " + tmp.string());
    for (const auto& [id, it] : items_) {
      out << it.to_json().dump() << "\n";
    }
  }
  std::error_code ec;
  fs::rename(tmp, dir_ / "items.ndjson", ec);
  if (ec) throw StoreUnavailable("cannot replace items file in " + dir_.string());
}

Item& Blackboard::find_locked(const std::string& id) {
  auto it = items_.find(id);
  if (it == items_.end()) {
    throw NotFound("no item " + id + " on blackboard " + name_);
  }
  return it->second;
}

InsertResult Blackboard::insert(Item item) {
  std::lock_guard lock(mu_);
  if (dedup_ && !item.dedup_hash.empty()) {
    auto dup = by_hash_.find(item.dedup_hash);
    if (dup != by_hash_.end()) {
      return {false, dup->second};
    }
  }
  item.item_id = format_id(next_seq_++);
  if (item.created_at == 0) item.created_at = now_wall();
  if (!item.dedup_hash.empty()) by_hash_[item.dedup_hash] = item.item_id;
  std::string id = item.item_id;
  items_.emplace(id, std::move(item));
  persist_locked();
  return {true, id};
}

Item Blackboard::merge(const std::string& id, const json& extra_fields,
                       const TagSet& extra_tags) {
  std::lock_guard lock(mu_);
  Item& it = find_locked(id);
  for (auto& [k, v] : extra_fields.items()) {
    if (k == "feed_ids" && v.is_array()) {
      if (!it.fields.contains("feed_ids")) it.fields["feed_ids"] = json::array();
      union_list_field(it.fields["feed_ids"], v);
    } else if (!it.fields.contains(k)) {
      it.fields[k] = v;
    }
  }
  it.tags.insert(extra_tags.begin(), extra_tags.end());
  persist_locked();
  return it;
}

Item Blackboard::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = items_.find(id);
  if (it == items_.end()) {
    throw NotFound("no item " + id + " on blackboard " + name_);
  }
  return it->second;
}

bool Blackboard::matches(const Item& it, const Query& q) {
  for (const auto& t : q.require_tags) {
    if (!it.has_tag(t)) return false;
  }
  for (const auto& t : q.forbid_tags) {
    if (it.has_tag(t)) return false;
  }
  for (const auto& f : q.require_fields) {
    if (!it.has_field(f)) return false;
  }
  return true;
}

std::vector<Item> Blackboard::query(const Query& q) const {
  std::lock_guard lock(mu_);
  std::vector<Item> out;
  for (const auto& [id, it] : items_) {
    if (matches(it, q)) out.push_back(it);
  }
  std::stable_sort(out.begin(), out.end(), [](const Item& a, const Item& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.item_id < b.item_id;
  });
  if (out.size() > q.limit) out.resize(q.limit);
  return out;
}

std::vector<Item> Blackboard::all() const {
  std::lock_guard lock(mu_);
  std::vector<Item> out;
  out.reserve(items_.size());
  for (const auto& [id, it] : items_) out.push_back(it);
  return out;
}

Item Blackboard::add_tags(const std::string& id, const TagSet& tags) {
  return apply(id, json::object(), tags, {});
}

Item Blackboard::remove_tags(const std::string& id, const TagSet& tags) {
  return apply(id, json::object(), {}, tags);
}

Item Blackboard::set_annotation(const std::string& id, const std::string& name,
                                const json& value) {
  json ann = json::object();
  ann[name] = value;
  return apply(id, ann, {}, {});
}

Item Blackboard::apply(const std::string& id, const json& annotations,
                       const TagSet& add, const TagSet& remove) {
  return apply(id, json::object(), annotations, add, remove);
}

Item Blackboard::apply(const std::string& id, const json& new_fields,
                       const json& annotations, const TagSet& add,
                       const TagSet& remove) {
  std::lock_guard lock(mu_);
  Item& it = find_locked(id);
  for (auto& [k, v] : new_fields.items()) {
    if (!it.fields.contains(k)) it.fields[k] = v;
  }
  for (auto& [k, v] : annotations.items()) it.annotations[k] = v;
  it.tags.insert(add.begin(), add.end());
  for (const auto& t : remove) it.tags.erase(t);
  persist_locked();
  return it;
}

std::map<Tag, std::size_t> Blackboard::list_tags() const {
  std::lock_guard lock(mu_);
  std::map<Tag, std::size_t> counts;
  for (const auto& [id, it] : items_) {
    for (const auto& t : it.tags) ++counts[t];
  }
  return counts;
}

std::size_t Blackboard::count() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

Store::Store(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "blackboards");
  for (const auto& entry : fs::directory_iterator(root_ / "blackboards")) {
    if (!entry.is_directory()) continue;
    std::string name = entry.path().filename().string();
    boards_.emplace(name, std::make_unique<Blackboard>(entry.path(), name,
                                                       false, false));
  }
}

Blackboard& Store::create(const std::string& name, bool dedup) {
  if (name.empty() || blank(name)) {
    throw InvalidName("blackboard name must be non-empty");
  }
  std::unique_lock lock(mu_);
  if (boards_.count(name)) {
    throw DuplicateBlackboard("blackboard exists: " + name);
  }
  auto bb = std::make_unique<Blackboard>(root_ / "blackboards" / name, name,
                                         dedup, true);
  auto& ref = *bb;
  boards_.emplace(name, std::move(bb));
  return ref;
}

Blackboard& Store::open(const std::string& name) {
  std::shared_lock lock(mu_);
  auto it = boards_.find(name);
  if (it == boards_.end()) throw UnknownBlackboard("no blackboard: " + name);
  return *it->second;
}

const Blackboard& Store::open(const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = boards_.find(name);
  if (it == boards_.end()) throw UnknownBlackboard("no blackboard: " + name);
  return *it->second;
}

bool Store::exists(const std::string& name) const {
  std::shared_lock lock(mu_);
  return boards_.count(name) > 0;
}

std::vector<std::string> Store::names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, bb] : boards_) out.push_back(name);
  return out;
}

void Store::init_standard() {
  create("articles", /*dedup=*/true);
  create("tweets", /*dedup=*/true);
  for (const char* name : {"feeds", "outlets", "locations", "urls", "queries"}) {
    create(name);
  }
}

}  // namespace newsdesk
