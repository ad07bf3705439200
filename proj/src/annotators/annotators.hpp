#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "text/lexicon.hpp"

namespace newsdesk {

// Sparse TF/IDF representation of a document. Raw term frequencies are kept
// alongside the weighted values; the mood inner product uses the raw counts.
struct FeatureVector {
  std::map<std::string, double> tfidf;
  std::map<std::string, int> tf;
  int token_count = 0;

  bool empty() const { return tfidf.empty(); }
  nlohmann::json to_json() const;
  static FeatureVector from_json(const nlohmann::json& j);
};

// Document-frequency table built by an explicit maintenance pass.
struct IdfTable {
  long long doc_count = 0;
  std::map<std::string, long long> df;

  double idf(const std::string& term) const;
  nlohmann::json to_json() const;
  static IdfTable from_json(const nlohmann::json& j);
};

// idf = ln(N / (1 + df)) + 1
double compute_idf(long long doc_count, long long df);

// Tokenize, drop stopwords, Porter-stem.
std::vector<std::string> prepare_terms(const std::string& content,
                                       const Lexicon& stopwords);

IdfTable build_idf_table(const std::vector<std::vector<std::string>>& docs);

FeatureVector extract_features(const std::string& content,
                               const Lexicon& stopwords, const IdfTable& idf);

// Stopword-profile language guesser: highest fraction of profile hits wins,
// ties broken by language code. nullopt when no profile matches at all.
std::optional<std::string> detect_language(
    const std::string& content, const std::map<std::string, Lexicon>& profiles);

// Normalized inner product per mood: sum(tf * weight) / token_count.
// Every mood in `lexicons` gets a score, zero included.
std::map<std::string, double> mood_scores(
    const FeatureVector& fv, const std::map<std::string, Lexicon>& lexicons);

// Strongest mood, or nullopt when every score is zero.
std::optional<std::string> argmax_mood(const std::map<std::string, double>& scores);

struct SubjectivityResult {
  double subjectivity = 0.0;
  int sentiment_count = 0;
  int adjective_count = 0;
};

SubjectivityResult sentiment_subjectivity(const std::string& content,
                                          const Lexicon& sentiment_adjectives,
                                          const Lexicon& all_adjectives);

// Flesch Reading Ease; nullopt when the text has no sentence or no word.
std::optional<double> readability(const std::string& content);

struct TopicDecision {
  double score = 0.0;
  bool positive = false;
};

TopicDecision topic_score(const FeatureVector& fv, const LinearModel& model);

struct ResolvedLocation {
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string region;
};

// Longest-match gazetteer scan with two-stage disambiguation: co-regional
// unambiguous mention first, population second.
std::vector<ResolvedLocation> geocode(
    const std::string& content, const std::vector<GazetteerEntry>& gazetteer);

using SparseVec = std::map<std::string, double>;

// Pairwise ranking perceptron over (popular, unpopular) feature pairs.
LinearModel popularity_train(
    const std::vector<std::pair<SparseVec, SparseVec>>& pairs,
    double eta = 0.1, int epochs = 1);

double popularity_score(const SparseVec& fv, const LinearModel& model);

}  // namespace newsdesk
