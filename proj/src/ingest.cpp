#include "circacp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "circacp/error.hpp"

namespace circacp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, std::size_t line, const char* what) {
    field = trim(field);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(std::string("cannot parse ") + what + " '" + std::string(field) + "'", line);
    if (!std::isfinite(v)) throw ParseError(std::string("non-finite ") + what, line);
    return v;
}

std::optional<std::size_t> find_column(const std::vector<std::string_view>& header, const std::string& name) {
    if (name.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

}  // namespace

EpochSeries make_series(Timestamp start, int epoch_seconds, std::vector<double> counts,
                        std::vector<std::size_t> markers) {
    if (epoch_seconds != 30 && epoch_seconds != 60)
        throw InvalidInput("epoch length must be 30 or 60 seconds, got " + std::to_string(epoch_seconds));
    if (counts.empty()) throw InvalidInput("series has no epochs");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!std::isfinite(counts[i]) || counts[i] < 0.0)
            throw InvalidInput("count at epoch " + std::to_string(i) + " is negative or not finite");
    }
    std::sort(markers.begin(), markers.end());
    markers.erase(std::unique(markers.begin(), markers.end()), markers.end());
    if (!markers.empty() && markers.back() >= counts.size())
        throw InvalidInput("marker index " + std::to_string(markers.back()) + " outside series");
    return EpochSeries{start, epoch_seconds, std::move(counts), std::move(markers)};
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(delimiter, pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

EpochSeries parse_series(std::string_view text, const ColumnMapping& format) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& out) {
        while (pos < text.size()) {
            const auto end = text.find('\n', pos);
            out = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
            pos = end == std::string_view::npos ? text.size() : end + 1;
            ++line_no;
            if (!trim(out).empty()) return true;
        }
        return false;
    };

    std::string_view line;
    if (!next_line(line)) throw ParseError("empty input: header row expected");
    if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    const auto header = split_fields(line, format.delimiter);
    const auto count_col = find_column(header, format.count_column);
    if (!count_col) throw ParseError("count column '" + format.count_column + "' not in header", line_no);
    const auto time_col = find_column(header, format.timestamp_column);
    const auto marker_col = find_column(header, format.marker_column);

    std::vector<double> counts;
    std::vector<std::size_t> markers;
    std::optional<Timestamp> first_time, prev_time;
    std::optional<std::int64_t> stride;
    if (format.epoch_seconds) stride = *format.epoch_seconds;

    while (next_line(line)) {
        const auto fields = split_fields(line, format.delimiter);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        const double c = parse_number(fields[*count_col], line_no, "count");
        if (c < 0.0) throw ParseError("negative count", line_no);

        if (time_col) {
            Timestamp t;
            try {
                t = parse_timestamp(fields[*time_col]);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line_no);
            }
            if (prev_time) {
                const std::int64_t step = t.seconds - prev_time->seconds;
                if (!stride) {
                    if (step != 30 && step != 60)
                        throw ParseError("timestamp stride of " + std::to_string(step) + " s is not 30 or 60",
                                         line_no);
                    stride = step;
                } else if (step != *stride) {
                    throw ParseError("non-uniform timestamp stride (" + std::to_string(step) + " s, expected " +
                                         std::to_string(*stride) + " s)",
                                     line_no);
                }
            } else {
                first_time = t;
            }
            prev_time = t;
        }
        if (marker_col) {
            const double m = parse_number(fields[*marker_col], line_no, "marker");
            if (m != 0.0) markers.push_back(counts.size());
        }
        counts.push_back(c);
    }
    if (counts.empty()) throw ParseError("no data rows after header", line_no);

    const int epoch = static_cast<int>(stride.value_or(60));
    try {
        return make_series(first_time.value_or(format.default_start), epoch, std::move(counts), std::move(markers));
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
}

std::vector<WearPeriod> find_wear_periods(const EpochSeries& s, double max_zero_run_minutes) {
    const double epoch_min = s.epoch_minutes();
    const std::size_t n = s.size();
    std::vector<WearPeriod> periods;

    // Periods are the complement of the over-long zero-runs.
    auto emit = [&](std::size_t begin, std::size_t end) {
        if (begin >= end) return;
        const bool any_wear = std::any_of(s.counts.begin() + static_cast<std::ptrdiff_t>(begin),
                                          s.counts.begin() + static_cast<std::ptrdiff_t>(end),
                                          [](double c) { return c != 0.0; });
        if (any_wear) periods.push_back({begin, end - 1, static_cast<double>(end - begin) * epoch_min});
    };

    std::size_t piece_start = 0;
    std::size_t i = 0;
    while (i < n) {
        if (s.counts[i] != 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && s.counts[j] == 0.0) ++j;
        if (static_cast<double>(j - i) * epoch_min > max_zero_run_minutes) {
            emit(piece_start, i);
            piece_start = j;
        }
        i = j;
    }
    emit(piece_start, n);
    return periods;
}

std::string_view to_string(ScreenFailure f) {
    switch (f) {
        case ScreenFailure::none: return "none";
        case ScreenFailure::too_short_total: return "too-short-total";
        case ScreenFailure::no_long_wear_period: return "no-long-wear-period";
    }
    return "unknown";
}

ScreenReport screen(const EpochSeries& s, const ScreenConfig& cfg) {
    ScreenReport report;
    report.total_minutes = s.total_minutes();
    const auto periods = find_wear_periods(s, cfg.max_zero_run_minutes);
    for (const auto& p : periods) {
        if (!report.longest_wear || p.length() > report.longest_wear->length()) report.longest_wear = p;
    }
    if (report.total_minutes < cfg.min_minutes) {
        report.reason = ScreenFailure::too_short_total;
    } else if (!report.longest_wear || report.longest_wear->length_minutes < cfg.min_minutes) {
        report.reason = ScreenFailure::no_long_wear_period;
    } else {
        report.passed = true;
    }
    return report;
}

EpochSeries aggregate(const EpochSeries& s, std::vector<std::string>* warnings) {
    if (s.epoch_seconds != 30) throw InvalidInput("aggregate expects 30-second epochs");
    const std::size_t pairs = s.size() / 2;
    if (s.size() % 2 != 0 && warnings)
        warnings->push_back("odd number of 30-s epochs; dropped trailing epoch " + std::to_string(s.size() - 1));
    if (pairs == 0) throw InvalidInput("too few 30-s epochs to aggregate");

    std::vector<double> counts(pairs);
    for (std::size_t i = 0; i < pairs; ++i) counts[i] = s.counts[2 * i] + s.counts[2 * i + 1];
    std::vector<std::size_t> markers;
    for (auto m : s.markers)
        if (m / 2 < pairs) markers.push_back(m / 2);
    return make_series(s.start_time, 60, std::move(counts), std::move(markers));
}

EpochSeries crop(const EpochSeries& s, const WearPeriod& period) {
    if (period.start_index > period.end_index || period.end_index >= s.size())
        throw InvalidInput("wear period outside series");
    std::vector<double> counts(s.counts.begin() + static_cast<std::ptrdiff_t>(period.start_index),
                               s.counts.begin() + static_cast<std::ptrdiff_t>(period.end_index + 1));
    std::vector<std::size_t> markers;
    for (auto m : s.markers)
        if (m >= period.start_index && m <= period.end_index) markers.push_back(m - period.start_index);
    return make_series(s.time_at(period.start_index), s.epoch_seconds, std::move(counts), std::move(markers));
}

}  // namespace circacp
