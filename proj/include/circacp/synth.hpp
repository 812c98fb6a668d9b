#pragma once

#include <cstdint>
#include <vector>

#include "circacp/detector.hpp"
#include "circacp/gamma.hpp"
#include "circacp/ingest.hpp"

namespace circacp {

/// 2024-01-01T12:00, the default recording start.
inline constexpr Timestamp kDefaultSynthStart{19723LL * 86400 + 12 * 3600};

/// Synthetic actigraphy recipe. Each night has a sleep window
/// [sleep_onset_clock + jitter, wake_onset_clock + jitter); epochs inside it are
/// drawn from `sleep`, all others from `wake`. Fixture defaults: sleep scale
/// 1/20 of the wake scale, shared shape 0.8.
struct SynthSpec {
    int days = 7;
    Timestamp start = kDefaultSynthStart;
    int epoch_seconds = 60;
    double sleep_onset_clock = 23 * 60.0;
    double wake_onset_clock = 7 * 60.0;
    double onset_jitter_sd = 20.0;
    GammaParams wake{0.8, 300.0};
    GammaParams sleep{0.8, 15.0};
    double marker_noise_sd = 0.0;
    double marker_miss_prob = 0.0;
    std::uint64_t seed = 1;
};

struct TruthEvent {
    std::size_t index = 0;
    Transition label = Transition::sleep_onset;
    bool operator==(const TruthEvent&) const = default;
};

struct GroundTruth {
    std::vector<TruthEvent> events;   ///< alternating, index-ordered
    std::vector<TruthEvent> markers;  ///< jittered copies of surviving events
};

struct SynthOutput {
    EpochSeries series;  ///< markers mirror truth.markers
    GroundTruth truth;
};

/// Deterministic in (spec, seed). Random draws happen in a fixed order:
/// schedule jitter (SOT then WOT, night by night), epoch counts, then one
/// (miss uniform, noise normal) pair per true event. Throws InvalidInput for
/// days < 1, bad parameters, or jitter that makes sleep windows overlap.
SynthOutput generate(const SynthSpec& spec);

}  // namespace circacp
