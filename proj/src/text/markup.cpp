#include "text/markup.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "text/tokenize.hpp"

namespace newsdesk {
namespace {

const std::set<std::string> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr"};

bool is_name_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '-' || c == '_' || c == ':' || c == '.';
}

void encode_cp(unsigned long cp, std::string& out) {
  if (cp == 0 || cp > 0x10FFFF) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct Parser {
  const std::string& src;
  size_t pos = 0;

  explicit Parser(const std::string& s) : src(s) {}

  bool starts_with(const char* s) const {
    return src.compare(pos, std::char_traits<char>::length(s), s) == 0;
  }

  void skip_until(const char* marker) {
    size_t p = src.find(marker, pos);
    pos = p == std::string::npos ? src.size()
                                 : p + std::char_traits<char>::length(marker);
  }

  std::string read_name() {
    std::string name;
    while (pos < src.size() && is_name_char(src[pos])) {
      name.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(src[pos]))));
      ++pos;
    }
    return name;
  }

  void skip_ws() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos]))) {
      ++pos;
    }
  }

  std::map<std::string, std::string> read_attrs(bool& self_close) {
    std::map<std::string, std::string> attrs;
    self_close = false;
    while (pos < src.size()) {
      skip_ws();
      if (pos >= src.size()) break;
      char c = src[pos];
      if (c == '>') {
        ++pos;
        break;
      }
      if (c == '/') {
        ++pos;
        if (pos < src.size() && src[pos] == '>') {
          ++pos;
          self_close = true;
          break;
        }
        continue;
      }
      std::string name = read_name();
      if (name.empty()) {
        ++pos;
        continue;
      }
      skip_ws();
      std::string value;
      if (pos < src.size() && src[pos] == '=') {
        ++pos;
        skip_ws();
        if (pos < src.size() && (src[pos] == '"' || src[pos] == '\'')) {
          char quote = src[pos++];
          size_t end = src.find(quote, pos);
          if (end == std::string::npos) end = src.size();
          value = src.substr(pos, end - pos);
          pos = std::min(end + 1, src.size());
        } else {
          size_t start = pos;
          while (pos < src.size() &&
                 !std::isspace(static_cast<unsigned char>(src[pos])) &&
                 src[pos] != '>' &&
                 !(src[pos] == '/' && pos + 1 < src.size() &&
                   src[pos + 1] == '>')) {
            ++pos;
          }
          value = src.substr(start, pos - start);
        }
      }
      attrs[name] = decode_entities(value);
    }
    return attrs;
  }
};

void append_text(MarkupNode& parent, const std::string& raw) {
  if (raw.empty()) return;
  MarkupNode t;
  t.text = decode_entities(raw);
  parent.children.push_back(std::move(t));
}

}  // namespace

std::string decode_entities(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    size_t semi = s.find(';', i + 1);
    if (semi == std::string::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    std::string ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") {
      out.push_back('&');
    } else if (ent == "lt") {
      out.push_back('<');
    } else if (ent == "gt") {
      out.push_back('>');
    } else if (ent == "quot") {
      out.push_back('"');
    } else if (ent == "apos") {
      out.push_back('\'');
    } else if (ent == "nbsp") {
      out.push_back(' ');
    } else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = 0;
      if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
        cp = std::strtoul(ent.c_str() + 2, nullptr, 16);
      } else {
        cp = std::strtoul(ent.c_str() + 1, nullptr, 10);
      }
      encode_cp(cp, out);
    } else {
      out.push_back(s[i]);
      ++i;
      continue;
    }
    i = semi + 1;
  }
  return out;
}

std::string normalize_ws(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

MarkupNode parse_markup(const std::string& src, bool html_rules) {
  MarkupNode root;
  root.name = "#root";
  std::vector<MarkupNode*> stack = {&root};
  Parser p(src);
  std::string pending_text;

  auto flush_text = [&] {
    append_text(*stack.back(), pending_text);
    pending_text.clear();
  };

  while (p.pos < src.size()) {
    if (src[p.pos] != '<') {
      pending_text.push_back(src[p.pos++]);
      continue;
    }
    if (p.starts_with("<!--")) {
      flush_text();
      p.skip_until("-->");
      continue;
    }
    if (p.starts_with("<![CDATA[")) {
      p.pos += 9;
      size_t end = src.find("]]>", p.pos);
      if (end == std::string::npos) end = src.size();
      // CDATA content is literal text, no entity decoding.
      MarkupNode t;
      t.text = src.substr(p.pos, end - p.pos);
      flush_text();
      stack.back()->children.push_back(std::move(t));
      p.pos = std::min(end + 3, src.size());
      continue;
    }
    if (p.starts_with("<!") || p.starts_with("<?")) {
      flush_text();
      p.skip_until(">");
      continue;
    }
    if (p.starts_with("</")) {
      flush_text();
      p.pos += 2;
      std::string name = p.read_name();
      p.skip_until(">");
      // Pop to the matching open element; ignore a stray close.
      for (size_t depth = stack.size(); depth > 1; --depth) {
        if (stack[depth - 1]->name == name) {
          stack.resize(depth - 1);
          break;
        }
      }
      continue;
    }
    if (p.pos + 1 < src.size() && is_name_char(src[p.pos + 1])) {
      flush_text();
      ++p.pos;
      std::string name = p.read_name();
      bool self_close = false;
      auto attrs = p.read_attrs(self_close);
      MarkupNode node;
      node.name = name;
      node.attrs = std::move(attrs);
      if (html_rules && (name == "script" || name == "style")) {
        // Raw text element; content kept as the node's text but excluded
        // from all_text().
        std::string close = "</" + name;
        size_t end = src.find(close, p.pos);
        size_t content_end = end == std::string::npos ? src.size() : end;
        node.text = src.substr(p.pos, content_end - p.pos);
        p.pos = content_end;
        if (end != std::string::npos) p.skip_until(">");
        stack.back()->children.push_back(std::move(node));
        continue;
      }
      stack.back()->children.push_back(std::move(node));
      if (!self_close && !(html_rules && kVoidElements.count(name))) {
        stack.push_back(&stack.back()->children.back());
      }
      continue;
    }
    // Bare '<' in text.
    pending_text.push_back(src[p.pos++]);
  }
  flush_text();
  return root;
}

std::string MarkupNode::all_text() const {
  if (is_text()) return text;
  if (name == "script" || name == "style") return "";
  // Plain concatenation: source whitespace in text nodes keeps words apart.
  // Block elements get a separating newline so paragraphs do not fuse.
  std::string out;
  for (const auto& c : children) {
    std::string t = c.all_text();
    if (t.empty()) continue;
    if (!out.empty() && !c.is_text()) out.push_back('\n');
    out += t;
  }
  return out;
}

const MarkupNode* MarkupNode::child(const std::string& name) const {
  for (const auto& c : children) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string MarkupNode::child_text(const std::string& name) const {
  const MarkupNode* c = child(name);
  return c ? normalize_ws(c->all_text()) : std::string();
}

void MarkupNode::find_all(const std::string& name,
                          std::vector<const MarkupNode*>& out) const {
  for (const auto& c : children) {
    if (c.name == name) out.push_back(&c);
    c.find_all(name, out);
  }
}

}  // namespace newsdesk
