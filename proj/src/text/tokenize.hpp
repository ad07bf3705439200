#pragma once

#include <string>
#include <vector>

namespace newsdesk {

// Splits on non-letter boundaries and lowercases. Multibyte UTF-8 sequences
// count as letters so accented words survive in one piece.
std::vector<std::string> tokenize(const std::string& text);

// Porter (1980) suffix-stripping stemmer. Non-ASCII words pass through.
std::string porter_stem(const std::string& word);

std::string to_lower_ascii(const std::string& s);

}  // namespace newsdesk
