#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace newsdesk {

// Minimal tag-soup DOM. Element names are lowercased; a node with an empty
// name is a text node (content in `text`, entities already decoded).
struct MarkupNode {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<MarkupNode> children;
  std::string text;

  bool is_text() const { return name.empty(); }
  std::string attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? std::string() : it->second;
  }
  // Concatenated text of this subtree, script/style excluded.
  std::string all_text() const;
  // First child element with the given (lowercase) name, nullptr if none.
  const MarkupNode* child(const std::string& name) const;
  std::string child_text(const std::string& name) const;
  void find_all(const std::string& name, std::vector<const MarkupNode*>& out) const;
};

// Lenient parse of HTML or XML; never throws. Unclosed and mismatched tags
// are recovered by auto-closing; returns a synthetic root element.
MarkupNode parse_markup(const std::string& src, bool html_rules = true);

// XML documents (feeds): no void elements, no raw-text script/style.
inline MarkupNode parse_xml(const std::string& src) {
  return parse_markup(src, false);
}

std::string decode_entities(const std::string& s);

// Collapses runs of whitespace to single spaces and trims.
std::string normalize_ws(const std::string& s);

}  // namespace newsdesk
