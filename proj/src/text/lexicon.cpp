#include "text/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "text/tokenize.hpp"

namespace newsdesk {
namespace {

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Lexicon Lexicon::stemmed() const {
  Lexicon out;
  out.name = name;
  for (const auto& [w, wt] : entries) {
    std::string s = porter_stem(w);
    auto it = out.entries.find(s);
    if (it == out.entries.end() || it->second < wt) out.entries[s] = wt;
  }
  return out;
}

Lexicon Lexicon::load(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lexicon: " + path);
  Lexicon lex;
  lex.name = name.empty() ? path : name;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    auto parts = split_tab(line);
    double w = 1.0;
    if (parts.size() > 1 && !strip(parts[1]).empty()) {
      try {
        w = std::stod(parts[1]);
      } catch (const std::exception&) {
        throw ParseError("bad weight in " + path + ": " + line);
      }
    }
    lex.entries[to_lower_ascii(strip(parts[0]))] = w;
  }
  if (lex.entries.empty()) throw ParseError("empty lexicon: " + path);
  return lex;
}

double LinearModel::score(const std::map<std::string, double>& features) const {
  double s = bias;
  for (const auto& [term, v] : features) {
    auto it = weights.find(term);
    if (it != weights.end()) s += it->second * v;
  }
  return s;
}

LinearModel LinearModel::load(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw MissingModel("cannot open model: " + path);
  LinearModel m;
  m.name = name.empty() ? path : name;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      double v = 0;
      if (hs >> key >> v) {
        if (key == "bias") m.bias = v;
        if (key == "threshold") m.threshold = v;
      }
      continue;
    }
    auto parts = split_tab(line);
    if (parts.size() < 2) throw ParseError("bad model line in " + path + ": " + line);
    m.weights[strip(parts[0])] = std::stod(parts[1]);
  }
  return m;
}

void LinearModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw StoreUnavailable("cannot write model: " + path);
  out << "#bias " << bias << "\n";
  out << "#threshold " << threshold << "\n";
  for (const auto& [term, w] : weights) {
    out << term << "\t" << w << "\n";
  }
}

std::vector<GazetteerEntry> load_gazetteer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open gazetteer: " + path);
  std::vector<GazetteerEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    auto parts = split_tab(line);
    if (parts.size() < 5) throw ParseError("bad gazetteer line: " + line);
    GazetteerEntry e;
    e.name = strip(parts[0]);
    e.latitude = std::stod(parts[1]);
    e.longitude = std::stod(parts[2]);
    e.population = std::stoll(parts[3]);
    e.region = strip(parts[4]);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace newsdesk
