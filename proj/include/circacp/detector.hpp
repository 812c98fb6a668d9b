#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circacp/cosinor.hpp"
#include "circacp/ingest.hpp"

namespace circacp {

enum class Transition { sleep_onset, wake_onset };

/// "SOT" / "WOT".
std::string_view to_string(Transition t);
/// Inverse of to_string; throws ParseError.
Transition parse_transition(std::string_view text);

/// Where a change point came from: 0 is the cosinor boundary itself, p >= 1 the
/// change-point search of refinement pass p.
struct Provenance {
    int pass = 0;
    bool operator==(const Provenance&) const = default;
};
/// "cosinor-boundary", "cp-pass1", "cp-pass2", ...
std::string to_string(Provenance p);

struct ChangePointEvent {
    std::size_t index = 0;  ///< epoch index within the analysed series
    Timestamp wall_time{};
    Transition label = Transition::sleep_onset;
    Provenance provenance{};
};

struct DetectionConfig {
    double dichotomize_q = 0.18;
    double lambda = 50.0;
    double edge_guard_minutes = 240.0;
    int refinement_passes = 2;
    double ch_delta_threshold = 100.0;
    double positivity_offset = 0.1;
    std::size_t min_margin = 1;
    CosinorParams cosinor_init{};
};

struct DetectionResult {
    std::vector<ChangePointEvent> events;
    double ch_cosinor = 0.0;
    double ch_refined = 0.0;
    bool error_flag = false;
    DetectionConfig config;

    CosinorFit cosinor;  ///< fitted on the offset counts
    CycleBoundaries rough;
    /// Events after each refinement pass; the last entry equals `events`.
    std::vector<std::vector<ChangePointEvent>> passes;
    std::vector<std::string> notes;
};

/// Sleep/wake onset detection on one wear period of 60-second epochs:
/// cosinor guidance, one Gamma change-point search per rough cycle boundary,
/// repeated for `refinement_passes` passes, then CH scoring of cosinor and refined
/// states. Throws Degenerate when the rhythm is flat or no full cycle exists.
DetectionResult detect(const EpochSeries& s, const DetectionConfig& cfg = {});

/// One refinement pass over `anchors` (rough boundaries or the previous pass).
/// Exposed for testing; detect() is the normal entry point.
std::vector<ChangePointEvent> refine_pass(std::span<const double> y, std::span<const ChangePointEvent> anchors,
                                          const DetectionConfig& cfg, int pass, double epoch_minutes,
                                          std::vector<std::string>* notes = nullptr);

/// Binary state per sample (1 = wake): after a SOT the state is 0, after a WOT 1,
/// and before the first event the opposite of what it switches to. Events are
/// applied in index order and need not alternate.
std::vector<int> states_from_events(std::span<const ChangePointEvent> events, std::size_t n);

/// Returned by ch_index when the within-cluster scatter is zero.
inline constexpr double kChPerfectSeparation = std::numeric_limits<double>::infinity();

/// Calinski-Harabasz index for the two-cluster split given by `states`.
/// Throws InvalidInput on length mismatch or when only one state is present.
double ch_index(std::span<const double> counts, std::span<const int> states);

/// True when refinement failed to improve the cosinor clustering by `threshold`.
bool flag_errors(double ch_refined, double ch_cosinor, double threshold = 100.0);

}  // namespace circacp
