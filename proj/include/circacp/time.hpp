#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace circacp {

/// Wall-clock instant, seconds since 1970-01-01T00:00 in the recording's local time.
/// Actigraphy files carry no zone information, so no conversion is ever applied.
struct Timestamp {
    std::int64_t seconds = 0;

    auto operator<=>(const Timestamp&) const = default;

    Timestamp plus_seconds(std::int64_t s) const { return Timestamp{seconds + s}; }
    Timestamp plus_minutes(double m) const;

    /// Minutes since the most recent midnight, in [0, 1440).
    double minute_of_day() const;
    /// Days since 1970-01-01 of the calendar date this instant falls on.
    std::int64_t day_number() const;
};

/// Accepts "YYYY-MM-DDTHH:MM[:SS]" with 'T' or a single space as separator,
/// or a bare date "YYYY-MM-DD" (midnight). Throws ParseError on anything else.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM", with ":SS" appended only when seconds are nonzero.
std::string format_timestamp(Timestamp ts);

/// "HH:MM" of a minute-of-day value, wrapping modulo 24 h.
std::string format_clock(double minute_of_day);

double minutes_between(Timestamp from, Timestamp to);

}  // namespace circacp
