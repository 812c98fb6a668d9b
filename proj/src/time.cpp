#include "circacp/time.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "circacp/error.hpp"

namespace circacp {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t width, std::string_view whole) {
    int value = 0;
    if (pos + width > text.size()) throw ParseError("truncated timestamp '" + std::string(whole) + "'");
    auto first = text.data() + pos;
    auto last = first + width;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw ParseError("bad timestamp '" + std::string(whole) + "'");
    return value;
}

}  // namespace

Timestamp Timestamp::plus_minutes(double m) const {
    return Timestamp{seconds + static_cast<std::int64_t>(std::llround(m * 60.0))};
}

double Timestamp::minute_of_day() const {
    const std::int64_t sec = seconds - floor_div(seconds, kSecondsPerDay) * kSecondsPerDay;
    return static_cast<double>(sec) / 60.0;
}

std::int64_t Timestamp::day_number() const { return floor_div(seconds, kSecondsPerDay); }

double minutes_between(Timestamp from, Timestamp to) {
    return static_cast<double>(to.seconds - from.seconds) / 60.0;
}

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);

    if (text.size() < 10 || text[4] != '-' || text[7] != '-')
        throw ParseError("bad timestamp '" + std::string(text) + "'");
    const int y = parse_fixed(text, 0, 4, text);
    const int mo = parse_fixed(text, 5, 2, text);
    const int d = parse_fixed(text, 8, 2, text);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ParseError("invalid calendar date '" + std::string(text) + "'");

    int hh = 0, mm = 0, ss = 0;
    if (text.size() > 10) {
        if ((text[10] != 'T' && text[10] != ' ') || text.size() < 16 || text[13] != ':')
            throw ParseError("bad timestamp '" + std::string(text) + "'");
        hh = parse_fixed(text, 11, 2, text);
        mm = parse_fixed(text, 14, 2, text);
        if (text.size() > 16) {
            if (text.size() != 19 || text[16] != ':') throw ParseError("bad timestamp '" + std::string(text) + "'");
            ss = parse_fixed(text, 17, 2, text);
        }
        if (hh > 23 || mm > 59 || ss > 59) throw ParseError("time of day out of range '" + std::string(text) + "'");
    }
    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    return Timestamp{days * kSecondsPerDay + hh * 3600 + mm * 60 + ss};
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const std::int64_t days = ts.day_number();
    const std::int64_t sec = ts.seconds - days * kSecondsPerDay;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    const int h = static_cast<int>(sec / 3600), m = static_cast<int>(sec % 3600 / 60), s = static_cast<int>(sec % 60);
    if (s == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, s);
    }
    return buf;
}

std::string format_clock(double minute_of_day) {
    double m = std::fmod(minute_of_day, 1440.0);
    if (m < 0) m += 1440.0;
    const int whole = static_cast<int>(std::lround(m)) % 1440;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", whole / 60, whole % 60);
    return buf;
}

}  // namespace circacp
