#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <thread>

#include "framework/module.hpp"
#include "test_util.hpp"

using namespace newsdesk;
using testutil::TempDir;

namespace {

const char* kMinimalSpec =
    "name = SportsTagger\n"
    "input_blackboard = articles\n"
    "max_items_per_run = 4\n"
    "threads = 1\n";

struct Fixture {
  TempDir dir;
  Store store;
  PrivateStore pstore;

  Fixture()
      : store(dir.path / "store"),
        pstore(dir.path / "private" / "m.json", "m") {
    store.create("articles", true);
  }

  std::string add_article(const TagSet& tags, json fields = json::object()) {
    Item it;
    it.fields = std::move(fields);
    it.tags = tags;
    it.created_at = 1;
    return store.open("articles").insert(std::move(it)).item_id;
  }
};

}  // namespace

TEST_CASE("load_spec defaults and validation") {
  ModuleSpec spec = load_spec(kMinimalSpec);
  CHECK(spec.name == "SportsTagger");
  CHECK(spec.output_blackboard == "articles");
  CHECK(spec.threads == 1);
  CHECK(spec.trigger_mode == TriggerMode::kTag);
  CHECK(spec.emit_tags.empty());

  CHECK_THROWS_AS(load_spec("input_blackboard = a\nmax_items_per_run = 1\nthreads = 1\n"),
                  MissingKey);
  CHECK_THROWS_AS(load_spec("name = X\ninput_blackboard = a\n"
                            "max_items_per_run = 1\nthreads = 0\n"),
                  InvalidValue);
  CHECK_THROWS_AS(load_spec("not a settings line\n"), ParseError);
}

TEST_CASE("load_spec full document") {
  ModuleSpec spec = load_spec(
      "name = MoodDetector\n"
      "description = four mood scores\n"
      "input_blackboard = tweets\n"
      "output_blackboard = tweets\n"
      "required_tags = en\n"
      "required_fields = content, pub_date\n"
      "emit_tags = mood.done\n"
      "max_items_per_run = 100\n"
      "threads = 4\n"
      "# a comment\n"
      "params.lexicon.joy = lex/joy.txt\n");
  CHECK(spec.required_tags == TagSet{"en"});
  CHECK(spec.required_fields == std::set<std::string>{"content", "pub_date"});
  CHECK(spec.param("lexicon.joy") == "lex/joy.txt");
  CHECK(spec.param("missing") == "");
}

TEST_CASE("scan mode requires its done marker") {
  std::string base =
      "name = FeatureExtractor\n"
      "input_blackboard = articles\n"
      "max_items_per_run = 10\n"
      "threads = 1\n"
      "trigger_mode = scan\n";
  CHECK_THROWS_AS(load_spec(base), InvalidValue);
  ModuleSpec ok = load_spec(base + "emit_tags = DONE>FeatureExtractor\n");
  CHECK(ok.trigger_mode == TriggerMode::kScan);
  CHECK_THROWS_AS(load_spec(base + "trigger_mode = sometimes\n"), InvalidValue);
}

TEST_CASE("two specs can share one routine") {
  ModuleRegistry registry;
  Routine tagger = [](const Item&, PrivateStore&) { return Outcome{}; };
  registry.add(load_spec("name = SportsTagger\ninput_blackboard = articles\n"
                         "max_items_per_run = 5\nthreads = 1\n"),
               tagger);
  registry.add(load_spec("name = PoliticsTagger\ninput_blackboard = articles\n"
                         "max_items_per_run = 5\nthreads = 1\n"),
               tagger);
  CHECK(registry.names().size() == 2);
  CHECK_THROWS_AS(registry.add(registry.spec("SportsTagger"), tagger),
                  DuplicateModule);
  registry.remove("PoliticsTagger");
  CHECK_FALSE(registry.has("PoliticsTagger"));
}

TEST_CASE("private store get/put/delete and isolation") {
  TempDir dir;
  PrivateStore a(dir.path / "a.json", "A");
  PrivateStore b(dir.path / "b.json", "B");
  a.put("model.v", "1");
  CHECK(a.get("model.v") == json("1"));
  CHECK(b.get("model.v") == std::nullopt);
  a.erase("model.v");
  CHECK(a.get("model.v") == std::nullopt);

  a.put("idf", json{{"doc_count", 2}});
  PrivateStore reloaded(dir.path / "a.json", "A");
  CHECK(reloaded.get("idf") == json{{"doc_count", 2}});
}

TEST_CASE("run_module honors the per-run item limit") {
  Fixture f;
  ModuleSpec spec = load_spec(kMinimalSpec);
  spec.emit_tags = {"Sports"};
  for (int i = 0; i < 10; ++i) f.add_article({for_tag("SportsTagger")});

  Routine ok = [](const Item&, PrivateStore&) { return Outcome{}; };
  RunReport r = run_module(f.store, spec, ok, f.pstore);
  CHECK(r.items_selected == 4);
  CHECK(r.items_succeeded == 4);
  CHECK(r.items_failed == 0);
  CHECK_FALSE(r.timed_out);

  auto counts = f.store.open("articles").list_tags();
  CHECK(counts["Sports"] == 4);
  CHECK(counts[for_tag("SportsTagger")] == 6);
}

TEST_CASE("sports tagger swaps trigger for topic tag") {
  Fixture f;
  ModuleSpec spec = load_spec(kMinimalSpec);
  spec.emit_tags = {"Sports"};
  auto id = f.add_article({for_tag("SportsTagger"), "en"});

  Routine ok = [](const Item&, PrivateStore&) { return Outcome{}; };
  run_module(f.store, spec, ok, f.pstore);
  Item it = f.store.open("articles").get(id);
  CHECK(it.has_tag("Sports"));
  CHECK_FALSE(it.has_tag(for_tag("SportsTagger")));
  CHECK(it.has_tag("en"));

  // No reprocessing: the claim is consumed.
  RunReport again = run_module(f.store, spec, ok, f.pstore);
  CHECK(again.items_selected == 0);
}

TEST_CASE("a failing item does not abort the run") {
  Fixture f;
  ModuleSpec spec = load_spec(kMinimalSpec);
  std::vector<std::string> ids;
  for (int i = 0; i < 3; ++i) {
    ids.push_back(f.add_article({for_tag("SportsTagger")},
                                json{{"n", i}}));
  }
  Routine flaky = [](const Item& it, PrivateStore&) {
    if (it.fields.at("n") == 1) throw std::runtime_error("boom");
    Outcome out;
    out.annotations["ok"] = true;
    return out;
  };
  RunReport r = run_module(f.store, spec, flaky, f.pstore);
  CHECK(r.items_selected == 3);
  CHECK(r.items_succeeded == 2);
  CHECK(r.items_failed == 1);

  auto& bb = f.store.open("articles");
  CHECK(bb.get(ids[0]).annotations["ok"] == true);
  CHECK(bb.get(ids[2]).annotations["ok"] == true);
  Item failed = bb.get(ids[1]);
  CHECK(failed.has_tag(for_tag("SportsTagger")));  // retried next launch
  CHECK(failed.annotations["sys.retries.SportsTagger"] == 1);
}

TEST_CASE("retries cap at three then FAILED>") {
  Fixture f;
  ModuleSpec spec = load_spec(kMinimalSpec);
  auto id = f.add_article({for_tag("SportsTagger")});
  Routine broken = [](const Item&, PrivateStore&) -> Outcome {
    throw std::runtime_error("always");
  };
  for (int attempt = 1; attempt <= 3; ++attempt) {
    RunReport r = run_module(f.store, spec, broken, f.pstore);
    CHECK(r.items_selected == 1);
    CHECK(r.items_failed == 1);
  }
  Item it = f.store.open("articles").get(id);
  CHECK_FALSE(it.has_tag(for_tag("SportsTagger")));
  CHECK(it.has_tag(failed_tag("SportsTagger")));
  CHECK(it.annotations["sys.retries.SportsTagger"] == 3);

  // FAILED> items are never selected again.
  RunReport r = run_module(f.store, spec, broken, f.pstore);
  CHECK(r.items_selected == 0);
}

TEST_CASE("scan mode selects on fields and skips done items") {
  Fixture f;
  ModuleSpec spec = load_spec(
      "name = FeatureExtractor\n"
      "input_blackboard = articles\n"
      "required_fields = content\n"
      "emit_tags = DONE>FeatureExtractor\n"
      "trigger_mode = scan\n"
      "max_items_per_run = 10\n"
      "threads = 1\n");
  f.add_article({}, json{{"content", "x"}});
  f.add_article({});  // no content field, never selected

  Routine ok = [](const Item&, PrivateStore&) { return Outcome{}; };
  RunReport first = run_module(f.store, spec, ok, f.pstore);
  CHECK(first.items_selected == 1);
  RunReport second = run_module(f.store, spec, ok, f.pstore);
  CHECK(second.items_selected == 0);  // done marker keeps it idempotent
}

TEST_CASE("routine may create new items on the output blackboard") {
  Fixture f;
  ModuleSpec spec = load_spec(
      "name = Translator\n"
      "input_blackboard = articles\n"
      "max_items_per_run = 10\n"
      "threads = 1\n");
  auto id = f.add_article({for_tag("Translator"), "fr"});

  Routine translate = [](const Item& it, PrivateStore&) {
    Outcome out;
    NewItemDraft draft;
    draft.fields["source_item_id"] = it.item_id;
    draft.tags = {"machine-translated", "en"};
    out.new_items.push_back(std::move(draft));
    return out;
  };
  run_module(f.store, spec, translate, f.pstore);
  auto& bb = f.store.open("articles");
  CHECK(bb.count() == 2);
  Query q;
  q.require_tags = {"machine-translated"};
  auto born = bb.query(q);
  REQUIRE(born.size() == 1);
  CHECK(born[0].fields["source_item_id"] == id);
}

TEST_CASE("parallel items all processed") {
  Fixture f;
  ModuleSpec spec = load_spec(
      "name = M\ninput_blackboard = articles\n"
      "max_items_per_run = 20\nthreads = 4\n");
  for (int i = 0; i < 20; ++i) f.add_article({for_tag("M")});
  Routine ok = [](const Item&, PrivateStore&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
    Outcome out;
    out.annotations["seen"] = true;
    return out;
  };
  RunReport r = run_module(f.store, spec, ok, f.pstore);
  CHECK(r.items_succeeded == 20);
  for (const auto& it : f.store.open("articles").all()) {
    CHECK(it.annotations["seen"] == true);
  }
}

TEST_CASE("deadline aborts between items, partial results persist") {
  Fixture f;
  ModuleSpec spec = load_spec(
      "name = Slow\ninput_blackboard = articles\n"
      "max_items_per_run = 5\nthreads = 1\n");
  for (int i = 0; i < 5; ++i) f.add_article({for_tag("Slow")});

  Routine slow = [](const Item&, PrivateStore&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(60));
    Outcome out;
    out.annotations["done"] = true;
    return out;
  };
  RunOptions opts;
  opts.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(90);
  RunReport r = run_module(f.store, spec, slow, f.pstore, opts);
  CHECK(r.timed_out);
  CHECK(r.items_selected == 5);
  CHECK(r.items_succeeded >= 1);
  CHECK(r.items_succeeded < 5);
  // Every item is either fully processed or untouched.
  for (const auto& it : f.store.open("articles").all()) {
    bool processed = it.annotations.contains("done");
    CHECK(processed == !it.has_tag(for_tag("Slow")));
  }
}

TEST_CASE("unknown blackboard surfaces") {
  Fixture f;
  ModuleSpec spec = load_spec(
      "name = M\ninput_blackboard = nowhere\n"
      "max_items_per_run = 1\nthreads = 1\n");
  Routine ok = [](const Item&, PrivateStore&) { return Outcome{}; };
  CHECK_THROWS_AS(run_module(f.store, spec, ok, f.pstore), UnknownBlackboard);
}
