#pragma once

#include <map>
#include <string>
#include <vector>

namespace newsdesk {

// Named weighted word list. File format: one "word<TAB>weight" per line,
// weight optional (default 1.0), '#' starts a comment line.
struct Lexicon {
  std::string name;
  std::map<std::string, double> entries;

  bool contains(const std::string& w) const { return entries.count(w) > 0; }
  double weight(const std::string& w) const {
    auto it = entries.find(w);
    return it == entries.end() ? 0.0 : it->second;
  }

  // Copy with every word Porter-stemmed, for matching against stemmed
  // feature terms. Colliding stems keep the larger weight.
  Lexicon stemmed() const;

  static Lexicon load(const std::string& path, const std::string& name = "");
};

// Sparse linear scorer. File format: "term<TAB>weight" lines plus optional
// "#bias <real>" and "#threshold <real>" headers.
struct LinearModel {
  std::string name;
  std::map<std::string, double> weights;
  double bias = 0.0;
  double threshold = 0.0;

  double score(const std::map<std::string, double>& features) const;

  static LinearModel load(const std::string& path, const std::string& name = "");
  void save(const std::string& path) const;
};

struct GazetteerEntry {
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  long long population = 0;
  std::string region;
};

// "name<TAB>lat<TAB>lon<TAB>population<TAB>region" per line.
std::vector<GazetteerEntry> load_gazetteer(const std::string& path);

}  // namespace newsdesk
