#include "framework/settings.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace newsdesk {
namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

SettingsMap parse_settings(const std::string& text) {
  SettingsMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'key = value', got: " + s);
    }
    std::string key = strip(s.substr(0, eq));
    if (key.empty()) {
      throw ParseError("line " + std::to_string(lineno) + ": empty key");
    }
    out[key] = strip(s.substr(eq + 1));
  }
  return out;
}

std::vector<SettingsMap> parse_settings_blocks(const std::string& text) {
  std::vector<SettingsMap> blocks;
  std::istringstream in(text);
  std::string line;
  std::string block;
  auto flush = [&] {
    if (strip(block).empty()) {
      block.clear();
      return;
    }
    blocks.push_back(parse_settings(block));
    block.clear();
  };
  while (std::getline(in, line)) {
    if (strip(line).empty()) {
      flush();
    } else {
      block += line;
      block += '\n';
    }
  }
  flush();
  return blocks;
}

TagSet parse_tag_list(const std::string& csv) {
  TagSet out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      std::string t = strip(cur);
      if (!t.empty()) out.insert(t);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  std::string t = strip(cur);
  if (!t.empty()) out.insert(t);
  return out;
}

}  // namespace newsdesk
