#pragma once

#include <map>
#include <string>
#include <vector>

#include "store/item.hpp"

namespace newsdesk {

// Flat "key = value" settings text: one pair per line, '#' comments,
// set-valued keys comma-separated.
using SettingsMap = std::map<std::string, std::string>;

SettingsMap parse_settings(const std::string& text);

// Blocks separated by blank lines (used by the schedule file).
std::vector<SettingsMap> parse_settings_blocks(const std::string& text);

TagSet parse_tag_list(const std::string& csv);

}  // namespace newsdesk
