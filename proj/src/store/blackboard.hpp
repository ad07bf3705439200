#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/errors.hpp"
#include "store/item.hpp"

namespace newsdesk {

struct Query {
  TagSet require_tags;
  TagSet forbid_tags;
  std::set<std::string> require_fields;
  std::size_t limit = 1000000;
};

struct InsertResult {
  bool inserted = false;
  std::string item_id;  // new id, or the existing duplicate's id
};

// One persistent collection of items. All mutations are serialized on a
// per-blackboard mutex and flushed to an ndjson file before returning, so a
// crashed run never leaves a half-applied item update visible.
class Blackboard {
 public:
  Blackboard(std::filesystem::path dir, std::string name, bool dedup,
             bool create);

  const std::string& name() const { return name_; }
  bool dedup_enabled() const { return dedup_; }

  InsertResult insert(Item item);
  Item merge(const std::string& id, const json& extra_fields,
             const TagSet& extra_tags);
  Item get(const std::string& id) const;
  std::vector<Item> query(const Query& q) const;
  std::vector<Item> all() const;

  Item add_tags(const std::string& id, const TagSet& tags);
  Item remove_tags(const std::string& id, const TagSet& tags);
  Item set_annotation(const std::string& id, const std::string& name,
                      const json& value);
  // Single atomic update: annotations merged, then tags added, then removed.
  Item apply(const std::string& id, const json& annotations, const TagSet& add,
             const TagSet& remove);
  // As above, plus new fields merged first-writer-wins (existing fields are
  // never overwritten).
  Item apply(const std::string& id, const json& new_fields,
             const json& annotations, const TagSet& add, const TagSet& remove);

  std::map<Tag, std::size_t> list_tags() const;
  std::size_t count() const;

  static bool matches(const Item& it, const Query& q);

 private:
  Item& find_locked(const std::string& id);
  void persist_locked();

  mutable std::mutex mu_;
  std::filesystem::path dir_;
  std::string name_;
  bool dedup_ = false;
  std::map<std::string, Item> items_;  // keyed by zero-padded id, so map order
                                       // is insertion order
  std::unordered_map<std::string, std::string> by_hash_;
  std::uint64_t next_seq_ = 1;
};

// A directory of blackboards. The seven standard boards of the news/tweet
// pipeline are created by init_standard(); arbitrary extra boards are fine.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  Blackboard& create(const std::string& name, bool dedup = false);
  Blackboard& open(const std::string& name);
  const Blackboard& open(const std::string& name) const;
  bool exists(const std::string& name) const;
  std::vector<std::string> names() const;

  // articles (dedup on), tweets, feeds, outlets, locations, urls, queries.
  void init_standard();

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Blackboard>> boards_;
};

}  // namespace newsdesk
