#include "annotators/annotators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "core/errors.hpp"
#include "text/tokenize.hpp"

namespace newsdesk {

using nlohmann::json;

json FeatureVector::to_json() const {
  return json{{"tfidf", tfidf}, {"tf", tf}, {"token_count", token_count}};
}

FeatureVector FeatureVector::from_json(const json& j) {
  FeatureVector fv;
  fv.tfidf = j.value("tfidf", std::map<std::string, double>{});
  fv.tf = j.value("tf", std::map<std::string, int>{});
  fv.token_count = j.value("token_count", 0);
  return fv;
}

double compute_idf(long long doc_count, long long df) {
  return std::log(static_cast<double>(doc_count) /
                  (1.0 + static_cast<double>(df))) +
         1.0;
}

double IdfTable::idf(const std::string& term) const {
  if (doc_count <= 0) return 1.0;  // no table built yet: plain TF
  auto it = df.find(term);
  return compute_idf(doc_count, it == df.end() ? 0 : it->second);
}

json IdfTable::to_json() const {
  return json{{"doc_count", doc_count}, {"df", df}};
}

IdfTable IdfTable::from_json(const json& j) {
  IdfTable t;
  t.doc_count = j.value("doc_count", 0LL);
  t.df = j.value("df", std::map<std::string, long long>{});
  return t;
}

std::vector<std::string> prepare_terms(const std::string& content,
                                       const Lexicon& stopwords) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize(content)) {
    if (stopwords.contains(tok)) continue;
    out.push_back(porter_stem(tok));
  }
  return out;
}

IdfTable build_idf_table(const std::vector<std::vector<std::string>>& docs) {
  IdfTable t;
  t.doc_count = static_cast<long long>(docs.size());
  for (const auto& terms : docs) {
    std::set<std::string> seen(terms.begin(), terms.end());
    for (const auto& term : seen) ++t.df[term];
  }
  return t;
}

FeatureVector extract_features(const std::string& content,
                               const Lexicon& stopwords, const IdfTable& idf) {
  FeatureVector fv;
  fv.token_count = static_cast<int>(tokenize(content).size());
  for (const auto& term : prepare_terms(content, stopwords)) {
    ++fv.tf[term];
  }
  for (const auto& [term, tf] : fv.tf) {
    fv.tfidf[term] = tf * idf.idf(term);
  }
  return fv;
}

std::optional<std::string> detect_language(
    const std::string& content, const std::map<std::string, Lexicon>& profiles) {
  auto tokens = tokenize(content);
  if (tokens.empty()) return std::nullopt;
  std::string best_lang;
  double best = 0.0;
  for (const auto& [lang, lex] : profiles) {  // map order = lexicographic ties
    int hits = 0;
    for (const auto& t : tokens) {
      if (lex.contains(t)) ++hits;
    }
    double frac = static_cast<double>(hits) / tokens.size();
    if (frac > best) {
      best = frac;
      best_lang = lang;
    }
  }
  if (best <= 0.0) return std::nullopt;
  return best_lang;
}

std::map<std::string, double> mood_scores(
    const FeatureVector& fv, const std::map<std::string, Lexicon>& lexicons) {
  std::map<std::string, double> scores;
  for (const auto& [mood, lex] : lexicons) {
    double s = 0.0;
    if (fv.token_count > 0) {
      for (const auto& [term, tf] : fv.tf) {
        s += tf * lex.weight(term);
      }
      s /= fv.token_count;
    }
    scores[mood] = s;
  }
  return scores;
}

std::optional<std::string> argmax_mood(
    const std::map<std::string, double>& scores) {
  std::string best;
  double best_score = 0.0;
  for (const auto& [mood, s] : scores) {
    if (s > best_score) {
      best_score = s;
      best = mood;
    }
  }
  if (best.empty()) return std::nullopt;
  return best;
}

SubjectivityResult sentiment_subjectivity(const std::string& content,
                                          const Lexicon& sentiment_adjectives,
                                          const Lexicon& all_adjectives) {
  SubjectivityResult r;
  for (const auto& tok : tokenize(content)) {
    if (sentiment_adjectives.contains(tok)) ++r.sentiment_count;
    if (all_adjectives.contains(tok)) ++r.adjective_count;
  }
  r.subjectivity = r.adjective_count == 0
                       ? 0.0
                       : static_cast<double>(r.sentiment_count) /
                             r.adjective_count;
  return r;
}

namespace {

int count_syllables(const std::string& word) {
  std::string w = to_lower_ascii(word);
  // Trailing silent e.
  if (w.size() > 1 && w.back() == 'e') w.pop_back();
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    if (vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  return std::max(groups, 1);
}

}  // namespace

std::optional<double> readability(const std::string& content) {
  int sentences = 0;
  for (size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // Run of terminators counts once; must be followed by space or end.
    size_t j = i;
    while (j + 1 < content.size() &&
           (content[j + 1] == '.' || content[j + 1] == '!' ||
            content[j + 1] == '?')) {
      ++j;
    }
    if (j + 1 >= content.size() ||
        std::isspace(static_cast<unsigned char>(content[j + 1]))) {
      ++sentences;
    }
    i = j;
  }
  auto words = tokenize(content);
  if (sentences == 0 || words.empty()) return std::nullopt;
  long long syllables = 0;
  for (const auto& w : words) syllables += count_syllables(w);
  double wps = static_cast<double>(words.size()) / sentences;
  double spw = static_cast<double>(syllables) / words.size();
  return 206.835 - 1.015 * wps - 84.6 * spw;
}

TopicDecision topic_score(const FeatureVector& fv, const LinearModel& model) {
  TopicDecision d;
  d.score = model.score(fv.tfidf);
  d.positive = d.score >= model.threshold;
  return d;
}

std::vector<ResolvedLocation> geocode(
    const std::string& content, const std::vector<GazetteerEntry>& gazetteer) {
  // Index gazetteer names by their token sequences.
  struct NameInfo {
    std::vector<const GazetteerEntry*> entries;
  };
  std::map<std::vector<std::string>, NameInfo> by_tokens;
  size_t max_name_tokens = 1;
  for (const auto& e : gazetteer) {
    auto toks = tokenize(e.name);
    if (toks.empty()) continue;
    max_name_tokens = std::max(max_name_tokens, toks.size());
    by_tokens[toks].entries.push_back(&e);
  }

  // Longest-match scan over the document tokens.
  auto doc = tokenize(content);
  struct Mention {
    const NameInfo* info;
    std::string display;
  };
  std::vector<Mention> mentions;
  size_t i = 0;
  while (i < doc.size()) {
    size_t longest = 0;
    const NameInfo* hit = nullptr;
    for (size_t len = std::min(max_name_tokens, doc.size() - i); len >= 1;
         --len) {
      std::vector<std::string> window(doc.begin() + i, doc.begin() + i + len);
      auto it = by_tokens.find(window);
      if (it != by_tokens.end()) {
        longest = len;
        hit = &it->second;
        break;
      }
    }
    if (hit) {
      mentions.push_back({hit, hit->entries.front()->name});
      i += longest;
    } else {
      ++i;
    }
  }

  // Regions anchored by unambiguous mentions.
  std::set<std::string> anchor_regions;
  for (const auto& m : mentions) {
    if (m.info->entries.size() == 1) {
      anchor_regions.insert(m.info->entries.front()->region);
    }
  }

  std::vector<ResolvedLocation> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& m : mentions) {
    const GazetteerEntry* pick = nullptr;
    if (m.info->entries.size() > 1) {
      for (const auto* e : m.info->entries) {
        if (anchor_regions.count(e->region)) {
          pick = e;
          break;
        }
      }
    }
    if (!pick) {
      for (const auto* e : m.info->entries) {
        if (!pick || e->population > pick->population ||
            (e->population == pick->population && e->region < pick->region)) {
          pick = e;
        }
      }
    }
    if (!seen.insert({pick->name, pick->region}).second) continue;
    out.push_back({pick->name, pick->latitude, pick->longitude, pick->region});
  }
  return out;
}

LinearModel popularity_train(
    const std::vector<std::pair<SparseVec, SparseVec>>& pairs, double eta,
    int epochs) {
  if (pairs.empty()) throw EmptyTrainingSet("no training pairs");
  LinearModel m;
  m.name = "popularity";
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& [pop, unpop] : pairs) {
      if (m.score(pop) <= m.score(unpop)) {
        for (const auto& [term, v] : pop) m.weights[term] += eta * v;
        for (const auto& [term, v] : unpop) m.weights[term] -= eta * v;
      }
    }
  }
  // Drop exact zeros so identical pairs leave no trace.
  for (auto it = m.weights.begin(); it != m.weights.end();) {
    it = it->second == 0.0 ? m.weights.erase(it) : std::next(it);
  }
  return m;
}

double popularity_score(const SparseVec& fv, const LinearModel& model) {
  return model.score(fv);
}

}  // namespace newsdesk
