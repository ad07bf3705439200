#include "text/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace newsdesk {
namespace {

bool is_word_byte(unsigned char c) {
  return std::isalpha(c) != 0 || c >= 0x80;
}

// --- Porter stemmer -------------------------------------------------------
// Straight transcription of the 1980 algorithm. Works on a lowercase ASCII
// buffer; b[0..k] is the current stem.

struct Stemmer {
  std::string b;
  int k = 0;  // index of last letter
  int j = 0;  // general offset used by the condition tests

  bool cons(int i) const {
    switch (b[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_cons(int i) const {
    return i >= 1 && b[i] == b[i - 1] && cons(i);
  }

  // cvc where the final c is not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char ch = b[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(const char* s) {
    int len = static_cast<int>(std::char_traits<char>::length(s));
    if (len > k + 1) return false;
    if (b.compare(k - len + 1, len, s) != 0) return false;
    j = k - len;
    return true;
  }

  void set_to(const char* s) {
    int len = static_cast<int>(std::char_traits<char>::length(s));
    b.replace(j + 1, std::string::npos, s);
    k = j + len;
  }

  void replace_if_m_gt0(const char* s) {
    if (m() > 0) set_to(s);
  }

  void step1ab() {
    if (b[k] == 's') {
      if (ends("sses")) {
        k -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (b[k - 1] != 's') {
        --k;
      }
    }
    if (ends("eed")) {
      if (m() > 0) --k;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k = j;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_cons(k)) {
        char ch = b[k];
        if (ch != 'l' && ch != 's' && ch != 'z') --k;
      } else if (m() == 1 && cvc(k)) {
        j = k;
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b[k] = 'i';
  }

  void step2() {
    if (k < 1) return;
    switch (b[k - 1]) {
      case 'a':
        if (ends("ational")) { replace_if_m_gt0("ate"); break; }
        if (ends("tional")) { replace_if_m_gt0("tion"); }
        break;
      case 'c':
        if (ends("enci")) { replace_if_m_gt0("ence"); break; }
        if (ends("anci")) { replace_if_m_gt0("ance"); }
        break;
      case 'e':
        if (ends("izer")) { replace_if_m_gt0("ize"); }
        break;
      case 'l':
        if (ends("bli")) { replace_if_m_gt0("ble"); break; }
        if (ends("alli")) { replace_if_m_gt0("al"); break; }
        if (ends("entli")) { replace_if_m_gt0("ent"); break; }
        if (ends("eli")) { replace_if_m_gt0("e"); break; }
        if (ends("ousli")) { replace_if_m_gt0("ous"); }
        break;
      case 'o':
        if (ends("ization")) { replace_if_m_gt0("ize"); break; }
        if (ends("ation")) { replace_if_m_gt0("ate"); break; }
        if (ends("ator")) { replace_if_m_gt0("ate"); }
        break;
      case 's':
        if (ends("alism")) { replace_if_m_gt0("al"); break; }
        if (ends("iveness")) { replace_if_m_gt0("ive"); break; }
        if (ends("fulness")) { replace_if_m_gt0("ful"); break; }
        if (ends("ousness")) { replace_if_m_gt0("ous"); }
        break;
      case 't':
        if (ends("aliti")) { replace_if_m_gt0("al"); break; }
        if (ends("iviti")) { replace_if_m_gt0("ive"); break; }
        if (ends("biliti")) { replace_if_m_gt0("ble"); }
        break;
      case 'g':
        if (ends("logi")) { replace_if_m_gt0("log"); }
        break;
    }
  }

  void step3() {
    switch (b[k]) {
      case 'e':
        if (ends("icate")) { replace_if_m_gt0("ic"); break; }
        if (ends("ative")) { replace_if_m_gt0(""); break; }
        if (ends("alize")) { replace_if_m_gt0("al"); }
        break;
      case 'i':
        if (ends("iciti")) { replace_if_m_gt0("ic"); }
        break;
      case 'l':
        if (ends("ical")) { replace_if_m_gt0("ic"); break; }
        if (ends("ful")) { replace_if_m_gt0(""); }
        break;
      case 's':
        if (ends("ness")) { replace_if_m_gt0(""); }
        break;
    }
  }

  void step4() {
    if (k < 1) return;
    switch (b[k - 1]) {
      case 'a': if (ends("al")) break; return;
      case 'c': if (ends("ance") || ends("ence")) break; return;
      case 'e': if (ends("er")) break; return;
      case 'i': if (ends("ic")) break; return;
      case 'l': if (ends("able") || ends("ible")) break; return;
      case 'n':
        if (ends("ant") || ends("ement") || ends("ment") || ends("ent")) break;
        return;
      case 'o':
        if (ends("ion") && j >= 0 && (b[j] == 's' || b[j] == 't')) break;
        if (ends("ou")) break;
        return;
      case 's': if (ends("ism")) break; return;
      case 't': if (ends("ate") || ends("iti")) break; return;
      case 'u': if (ends("ous")) break; return;
      case 'v': if (ends("ive")) break; return;
      case 'z': if (ends("ize")) break; return;
      default: return;
    }
    if (m() > 1) k = j;
  }

  void step5() {
    j = k;
    if (b[k] == 'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k - 1))) --k;
    }
    if (b[k] == 'l' && double_cons(k) && m() > 1) --k;
  }

  std::string stem(const std::string& word) {
    b = word;
    k = static_cast<int>(b.size()) - 1;
    if (k <= 1) return b;
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return b.substr(0, k + 1);
  }
};

}  // namespace

std::string to_lower_ascii(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string porter_stem(const std::string& word) {
  for (unsigned char c : word) {
    if (c >= 0x80 || std::isalpha(c) == 0) return word;
  }
  Stemmer st;
  return st.stem(to_lower_ascii(word));
}

}  // namespace newsdesk
