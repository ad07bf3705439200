#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace newsdesk {

// Timestamps are seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

Timestamp now_wall();

// RFC 822 date as used by RSS 2.0, e.g. "Mon, 06 Sep 2009 16:20:00 +0000".
std::optional<Timestamp> parse_rfc822(const std::string& s);

// RFC 3339 date as used by Atom 1.0, e.g. "2009-09-06T16:20:00Z".
std::optional<Timestamp> parse_rfc3339(const std::string& s);

// Either of the above.
std::optional<Timestamp> parse_datetime(const std::string& s);

std::string format_iso8601(Timestamp t);

// "YYYY-MM-DD" of the UTC day containing t.
std::string utc_date(Timestamp t);

}  // namespace newsdesk
