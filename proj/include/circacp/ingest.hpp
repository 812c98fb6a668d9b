#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circacp/time.hpp"

namespace circacp {

/// Uniformly sampled activity counts. Construct through make_series(), which
/// enforces the invariants; the fields stay public for cheap read access.
struct EpochSeries {
    Timestamp start_time{};
    int epoch_seconds = 60;
    std::vector<double> counts;
    /// Sorted, unique epoch indices flagged by the wearer's event button.
    std::vector<std::size_t> markers;

    std::size_t size() const { return counts.size(); }
    double epoch_minutes() const { return epoch_seconds / 60.0; }
    double total_minutes() const { return static_cast<double>(counts.size()) * epoch_minutes(); }
    Timestamp time_at(std::size_t index) const {
        return start_time.plus_seconds(static_cast<std::int64_t>(index) * epoch_seconds);
    }
};

/// Validates and normalises (markers sorted, deduplicated). Throws InvalidInput.
EpochSeries make_series(Timestamp start, int epoch_seconds, std::vector<double> counts,
                        std::vector<std::size_t> markers = {});

/// Column mapping for delimited actigraphy files. Empty column names mean
/// "not present"; the count column is mandatory.
struct ColumnMapping {
    std::string timestamp_column = "timestamp";
    std::string count_column = "count";
    std::string marker_column = "marker";
    char delimiter = ',';
    /// Used when the file has no timestamp column, and checked against the
    /// stride when it does. Absent: inferred from timestamps, else 60.
    std::optional<int> epoch_seconds;
    /// Start time for files without a timestamp column.
    Timestamp default_start{};
};

/// Splits one delimited line; no quoting support beyond trimming whitespace and '\r'.
std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

/// Parses delimited text into a series. Columns named in `format` but absent from
/// the header are skipped, except the count column. Errors carry the 1-based line.
EpochSeries parse_series(std::string_view text, const ColumnMapping& format = {});

struct WearPeriod {
    std::size_t start_index = 0;
    std::size_t end_index = 0;  // inclusive
    double length_minutes = 0.0;

    std::size_t length() const { return end_index - start_index + 1; }
    bool operator==(const WearPeriod&) const = default;
};

/// Maximal stretches with no zero-run strictly longer than `max_zero_run_minutes`.
/// Over-long zero-runs separate periods and belong to none. A stretch made only
/// of zeros is never a wear period.
std::vector<WearPeriod> find_wear_periods(const EpochSeries& s, double max_zero_run_minutes = 120.0);

enum class ScreenFailure { none, too_short_total, no_long_wear_period };
std::string_view to_string(ScreenFailure f);

struct ScreenConfig {
    double min_minutes = 5760.0;
    double max_zero_run_minutes = 120.0;
};

struct ScreenReport {
    bool passed = false;
    double total_minutes = 0.0;
    std::optional<WearPeriod> longest_wear;
    ScreenFailure reason = ScreenFailure::none;
};

ScreenReport screen(const EpochSeries& s, const ScreenConfig& cfg = {});

/// 30-s to 60-s epochs by pairwise sums. An odd trailing epoch is dropped and a
/// warning appended to `warnings` when given. Throws InvalidInput on 60-s input.
EpochSeries aggregate(const EpochSeries& s, std::vector<std::string>* warnings = nullptr);

/// Sub-series covering `period`, with start time and markers shifted accordingly.
EpochSeries crop(const EpochSeries& s, const WearPeriod& period);

}  // namespace circacp
