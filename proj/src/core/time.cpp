#include "core/time.hpp"

#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>

namespace newsdesk {
namespace {

constexpr std::array<const char*, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_from_name(const std::string& name) {
  for (int i = 0; i < 12; ++i) {
    if (name.size() >= 3 && std::strncmp(name.c_str(), kMonths[i], 3) == 0) {
      return i;
    }
  }
  return -1;
}

// Days since epoch for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y += m <= 2;
}

Timestamp to_epoch(int y, int mo, int d, int h, int mi, int s) {
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::optional<int> parse_tz_offset(const std::string& tz) {
  if (tz.empty() || tz == "Z" || tz == "UT" || tz == "GMT" || tz == "UTC") {
    return 0;
  }
  if (tz == "EST") return -5 * 3600;
  if (tz == "EDT") return -4 * 3600;
  if (tz == "CST") return -6 * 3600;
  if (tz == "CDT") return -5 * 3600;
  if (tz == "MST") return -7 * 3600;
  if (tz == "MDT") return -6 * 3600;
  if (tz == "PST") return -8 * 3600;
  if (tz == "PDT") return -7 * 3600;
  if ((tz[0] == '+' || tz[0] == '-') && tz.size() >= 5) {
    int h = 0, m = 0;
    std::string digits = tz.substr(1);
    if (digits.size() == 5 && digits[2] == ':') digits.erase(2, 1);
    if (digits.size() != 4) return std::nullopt;
    h = (digits[0] - '0') * 10 + (digits[1] - '0');
    m = (digits[2] - '0') * 10 + (digits[3] - '0');
    int off = h * 3600 + m * 60;
    return tz[0] == '-' ? -off : off;
  }
  return std::nullopt;
}

}  // namespace

Timestamp now_wall() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::optional<Timestamp> parse_rfc822(const std::string& s) {
  // Optional leading "Www, ".
  std::string rest = s;
  auto comma = rest.find(',');
  if (comma != std::string::npos && comma <= 3) rest = rest.substr(comma + 1);
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) {
    rest.erase(rest.begin());
  }
  int day = 0, year = 0, h = 0, mi = 0, sec = 0;
  char mon[4] = {0};
  char tz[8] = {0};
  int n = std::sscanf(rest.c_str(), "%d %3s %d %d:%d:%d %7s",
                      &day, mon, &year, &h, &mi, &sec, tz);
  if (n < 6) {
    sec = 0;
    n = std::sscanf(rest.c_str(), "%d %3s %d %d:%d %7s",
                    &day, mon, &year, &h, &mi, tz);
    if (n < 5) return std::nullopt;
  }
  int m = month_from_name(mon);
  if (m < 0 || day < 1 || day > 31) return std::nullopt;
  if (year < 100) year += year < 70 ? 2000 : 1900;
  auto off = parse_tz_offset(tz);
  if (!off) return std::nullopt;
  return to_epoch(year, m + 1, day, h, mi, sec) - *off;
}

std::optional<Timestamp> parse_rfc3339(const std::string& s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d%n",
                  &y, &mo, &d, &h, &mi, &sec, &consumed) < 6 &&
      std::sscanf(s.c_str(), "%d-%d-%d %d:%d:%d%n",
                  &y, &mo, &d, &h, &mi, &sec, &consumed) < 6) {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  std::string tail = s.substr(consumed);
  if (!tail.empty() && tail[0] == '.') {
    size_t i = 1;
    while (i < tail.size() && std::isdigit(static_cast<unsigned char>(tail[i]))) ++i;
    tail = tail.substr(i);
  }
  auto off = parse_tz_offset(tail);
  if (!off) return std::nullopt;
  return to_epoch(y, mo, d, h, mi, sec) - *off;
}

std::optional<Timestamp> parse_datetime(const std::string& s) {
  if (auto t = parse_rfc3339(s)) return t;
  return parse_rfc822(s);
}

std::string format_iso8601(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string utc_date(Timestamp t) {
  return format_iso8601(t).substr(0, 10);
}

}  // namespace newsdesk
