#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circacp/detector.hpp"
#include "circacp/time.hpp"

namespace circacp {

struct ValidationPair {
    std::string subject_id;
    int day_index = 0;  ///< night number, 0 for the night of the subject's first event
    Transition label = Transition::sleep_onset;
    double estimated_min = 0.0;
    double marker_min = 0.0;
    double diff = 0.0;  ///< estimated_min - marker_min
    Timestamp estimated_time{};
    Timestamp marker_time{};
};

struct MatchOptions {
    double window_minutes = 180.0;
    /// SOT clock times before this minute of day count as after midnight.
    double noon_cutoff_minutes = 720.0;
};

/// Minutes since the preceding midnight; SOTs before the noon cutoff get +1440
/// so that bedtimes on either side of midnight stay on one continuous scale.
double to_minutes_since_midnight(Timestamp ts, Transition label, double noon_cutoff_minutes = 720.0);

/// Pairs each event with a marker within +/- window. A SOT prefers the latest
/// candidate and a WOT the earliest; a marker claimed by several events goes to
/// the nearest one (earlier event on ties) and the others fall back to their next
/// candidate. Events without a candidate produce no pair. Output follows event order.
std::vector<ValidationPair> match_markers(std::span<const ChangePointEvent> events, std::span<const Timestamp> markers,
                                          const MatchOptions& opts = {}, const std::string& subject_id = {});

struct AgreementStats {
    std::size_t n = 0;
    double bias = 0.0;
    double sd = 0.0;
    double loa_low = 0.0;
    double loa_high = 0.0;
};

struct AgreementReport {
    AgreementStats overall;
    std::optional<AgreementStats> sot;  ///< present when at least two SOT pairs exist
    std::optional<AgreementStats> wot;
};

/// Bland-Altman statistics of a difference sample: mean, n-1 standard deviation,
/// and limits mean -/+ 1.96 sd. Throws InvalidInput when fewer than two values.
AgreementStats agreement_stats(std::span<const double> diffs);
AgreementReport bland_altman(std::span<const ValidationPair> pairs);

/// One measurement of a sleep timing, keyed for variance decomposition.
struct Observation {
    std::string subject;
    int day = 0;
    std::string method;
    double value = 0.0;
};

/// Percentage shares of nested sums of squares: method, then subject, then day
/// within subject, then residual. A descriptive decomposition, not a fitted
/// mixed model. When all observations are equal the shares are zero and
/// `defined` is false.
struct VarianceShares {
    double method = 0.0;
    double subject = 0.0;
    double day = 0.0;
    double residual = 0.0;
    bool defined = false;
};

/// Needs at least two subjects with at least two days each; throws InvalidInput otherwise.
VarianceShares variance_summary(std::span<const Observation> obs);

/// Two observations per pair of the given label: "algorithm" and "marker".
std::vector<Observation> observations_from_pairs(std::span<const ValidationPair> pairs, Transition label);

}  // namespace circacp
