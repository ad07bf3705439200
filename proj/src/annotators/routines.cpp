#include "annotators/routines.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "annotators/annotators.hpp"
#include "core/errors.hpp"
#include "ingest/scrape.hpp"

namespace newsdesk {
namespace {

std::string require_param(const ModuleSpec& spec, const std::string& key) {
  std::string v = spec.param(key);
  if (v.empty()) {
    throw MissingKey("module " + spec.name + " needs params." + key);
  }
  return v;
}

// params with a common prefix, e.g. profile.en / profile.fr -> {en, fr}.
std::map<std::string, std::string> prefixed_params(const ModuleSpec& spec,
                                                   const std::string& prefix) {
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : spec.params) {
    if (key.rfind(prefix, 0) == 0 && key.size() > prefix.size()) {
      out[key.substr(prefix.size())] = value;
    }
  }
  return out;
}

// Offline page lookup: the path component of the link under a local root.
std::string link_to_path(const std::string& page_root, const std::string& link) {
  std::string rest = link;
  size_t scheme = rest.find("://");
  if (scheme != std::string::npos) {
    size_t slash = rest.find('/', scheme + 3);
    rest = slash == std::string::npos ? "/" : rest.substr(slash);
  }
  if (rest.empty() || rest == "/") {
    throw FetchError("link has no page path: " + link);
  }
  return (std::filesystem::path(page_root) / rest.substr(1)).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FetchError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FeatureVector features_of(const Item& item) {
  auto node = item.annotations.find("features");
  if (node == item.annotations.end()) {
    throw InvalidValue("item " + item.item_id + " has no feature vector yet");
  }
  return FeatureVector::from_json(*node);
}

Routine make_scrape(const ModuleSpec& spec) {
  std::string page_root = require_param(spec, "page_root");
  return [page_root](const Item& item, PrivateStore&) {
    std::string link = item.fields.value("link", "");
    if (link.empty()) throw InvalidValue("item has no link to scrape");
    Outcome out;
    out.new_fields["content"] =
        scrape_html(read_file(link_to_path(page_root, link)));
    return out;
  };
}

Routine make_language(const ModuleSpec& spec) {
  auto profiles = std::make_shared<std::map<std::string, Lexicon>>();
  for (const auto& [code, path] : prefixed_params(spec, "profile.")) {
    (*profiles)[code] = Lexicon::load(path, code);
  }
  if (profiles->empty()) {
    throw MissingKey("module " + spec.name + " needs params.profile.<code>");
  }
  return [profiles](const Item& item, PrivateStore&) {
    Outcome out;
    auto lang = detect_language(item_text(item), *profiles);
    out.annotations["lang"] = lang ? *lang : "unknown";
    if (lang) out.add_tags.insert(*lang);
    return out;
  };
}

Routine make_translate(const ModuleSpec& spec) {
  // Identity translation stub: a real engine would go here. The point is the
  // coordination shape — a fresh item that re-enters the pipeline as English.
  std::string target = spec.param("target");
  if (target.empty()) target = "en";
  TagSet new_tags = parse_tag_list(spec.param("new_item_tags"));
  new_tags.insert(target);
  return [target, new_tags](const Item& item, PrivateStore&) {
    Outcome out;
    NewItemDraft draft;
    draft.fields = item.fields;
    draft.fields["language"] = target;
    draft.fields["translated_of"] = item.item_id;
    draft.fields.erase("link");  // already scraped on the original
    draft.tags = new_tags;
    out.new_items.push_back(std::move(draft));
    out.annotations["translated_to"] = target;
    return out;
  };
}

Routine make_features(const ModuleSpec& spec) {
  auto stopwords =
      std::make_shared<Lexicon>(Lexicon::load(require_param(spec, "stopwords")));
  return [stopwords](const Item& item, PrivateStore& ps) {
    // The idf table appears after the first maintenance pass; until then
    // features are plain normalized tf.
    IdfTable idf;
    if (auto stored = ps.get("idf")) idf = IdfTable::from_json(*stored);
    Outcome out;
    out.annotations["features"] =
        extract_features(item_text(item), *stopwords, idf).to_json();
    return out;
  };
}

Routine make_mood(const ModuleSpec& spec) {
  auto lexicons = std::make_shared<std::map<std::string, Lexicon>>();
  for (const auto& [mood, path] : prefixed_params(spec, "lexicon.")) {
    (*lexicons)[mood] = Lexicon::load(path, mood).stemmed();
  }
  if (lexicons->empty()) {
    throw MissingKey("module " + spec.name + " needs params.lexicon.<mood>");
  }
  return [lexicons](const Item& item, PrivateStore&) {
    FeatureVector fv = features_of(item);
    Outcome out;
    auto scores = mood_scores(fv, *lexicons);
    for (const auto& [mood, score] : scores) {
      out.annotations["mood." + mood] = score;
    }
    if (auto strongest = argmax_mood(scores)) {
      out.annotations["mood"] = *strongest;
      out.add_tags.insert("mood." + *strongest);
    }
    return out;
  };
}

Routine make_sentiment(const ModuleSpec& spec) {
  auto sentiment = std::make_shared<Lexicon>(
      Lexicon::load(require_param(spec, "sentiment_lexicon")));
  auto adjectives = std::make_shared<Lexicon>(
      Lexicon::load(require_param(spec, "adjective_lexicon")));
  return [sentiment, adjectives](const Item& item, PrivateStore&) {
    auto r = sentiment_subjectivity(item_text(item), *sentiment, *adjectives);
    Outcome out;
    out.annotations["subjectivity"] = r.subjectivity;
    out.annotations["sentiment_count"] = r.sentiment_count;
    out.annotations["adjective_count"] = r.adjective_count;
    return out;
  };
}

Routine make_readability(const ModuleSpec&) {
  return [](const Item& item, PrivateStore&) {
    Outcome out;
    if (auto score = readability(item_text(item))) {
      out.annotations["readability"] = *score;
    }
    return out;
  };
}

Routine make_topic(const ModuleSpec& spec) {
  auto model = std::make_shared<LinearModel>(
      LinearModel::load(require_param(spec, "model")));
  std::string topic = require_param(spec, "topic");
  return [model, topic](const Item& item, PrivateStore&) {
    TopicDecision d = topic_score(features_of(item), *model);
    Outcome out;
    out.annotations["topic." + topic] = d.score;
    if (d.positive) out.add_tags.insert(topic);
    return out;
  };
}

Routine make_geocode(const ModuleSpec& spec) {
  auto gazetteer = std::make_shared<std::vector<GazetteerEntry>>(
      load_gazetteer(require_param(spec, "gazetteer")));
  return [gazetteer](const Item& item, PrivateStore&) {
    Outcome out;
    json locations = json::array();
    for (const auto& loc : geocode(item_text(item), *gazetteer)) {
      locations.push_back(json{{"name", loc.name},
                               {"latitude", loc.latitude},
                               {"longitude", loc.longitude},
                               {"region", loc.region}});
      out.add_tags.insert(loc.name);
    }
    out.annotations["locations"] = std::move(locations);
    return out;
  };
}

Routine make_popularity(const ModuleSpec& spec) {
  auto model = std::make_shared<LinearModel>(
      LinearModel::load(require_param(spec, "model")));
  return [model](const Item& item, PrivateStore&) {
    FeatureVector fv = features_of(item);
    Outcome out;
    out.annotations["popularity"] = popularity_score(fv.tfidf, *model);
    return out;
  };
}

}  // namespace

std::string item_text(const Item& item) {
  std::string content = item.fields.value("content", "");
  if (!content.empty()) return content;
  std::string title = item.fields.value("title", "");
  std::string description = item.fields.value("description", "");
  if (title.empty()) return description;
  if (description.empty()) return title;
  return title + "\n" + description;
}

Routine make_routine(const ModuleSpec& spec) {
  std::string kind = require_param(spec, "routine");
  if (kind == "scrape") return make_scrape(spec);
  if (kind == "language") return make_language(spec);
  if (kind == "translate") return make_translate(spec);
  if (kind == "features") return make_features(spec);
  if (kind == "mood") return make_mood(spec);
  if (kind == "sentiment") return make_sentiment(spec);
  if (kind == "readability") return make_readability(spec);
  if (kind == "topic") return make_topic(spec);
  if (kind == "geocode") return make_geocode(spec);
  if (kind == "popularity") return make_popularity(spec);
  throw InvalidValue("unknown routine: " + kind);
}

std::vector<std::string> builtin_routines() {
  return {"scrape",  "language",    "translate", "features", "mood",
          "sentiment", "readability", "topic",     "geocode",  "popularity"};
}

}  // namespace newsdesk
