#include "circacp/synth.hpp"

#include <algorithm>
#include <cmath>

#include "circacp/error.hpp"
#include "circacp/random.hpp"

namespace circacp {

namespace {

void check(const SynthSpec& spec) {
    if (spec.days < 1) throw InvalidInput("synthetic series needs at least one day");
    if (spec.epoch_seconds != 30 && spec.epoch_seconds != 60) throw InvalidInput("epoch_seconds must be 30 or 60");
    for (const auto& g : {spec.wake, spec.sleep})
        if (!(g.shape > 0.0) || !(g.scale > 0.0)) throw InvalidInput("Gamma parameters must be positive");
    if (spec.wake.scale < spec.sleep.scale) throw InvalidInput("wake scale must not be below sleep scale");
    if (spec.onset_jitter_sd < 0.0 || spec.marker_noise_sd < 0.0) throw InvalidInput("negative noise level");
    if (spec.marker_miss_prob < 0.0 || spec.marker_miss_prob > 1.0)
        throw InvalidInput("marker_miss_prob must lie in [0, 1]");
}

}  // namespace

SynthOutput generate(const SynthSpec& spec) {
    check(spec);
    Rng rng(spec.seed);

    const double epoch_min = spec.epoch_seconds / 60.0;
    const std::size_t n = static_cast<std::size_t>(spec.days) * 1440 * 60 / static_cast<std::size_t>(spec.epoch_seconds);
    // minutes from the recording start to the midnight that begins its first calendar day
    const double first_midnight = -spec.start.minute_of_day();
    const double sleep_span = spec.wake_onset_clock > spec.sleep_onset_clock
                                  ? spec.wake_onset_clock - spec.sleep_onset_clock
                                  : spec.wake_onset_clock + 1440.0 - spec.sleep_onset_clock;

    // Sleep windows in minutes from start; one night before and after the
    // recording are included so a series may begin or end asleep.
    std::vector<std::pair<double, double>> windows;
    for (int d = -1; d <= spec.days; ++d) {
        const double onset = first_midnight + d * 1440.0 + spec.sleep_onset_clock + rng.normal(0.0, spec.onset_jitter_sd);
        const double wake = first_midnight + d * 1440.0 + spec.sleep_onset_clock + sleep_span +
                            rng.normal(0.0, spec.onset_jitter_sd);
        windows.emplace_back(onset, wake);
    }
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const bool ordered = windows[w].first + 1.0 <= windows[w].second &&
                             (w == 0 || windows[w - 1].second + 1.0 <= windows[w].first);
        if (!ordered) throw InvalidInput("infeasible schedule: jittered sleep windows overlap");
    }

    auto to_index = [&](double minutes) { return static_cast<long long>(std::llround(minutes / epoch_min)); };
    std::vector<int> asleep(n, 0);
    GroundTruth truth;
    for (const auto& [onset, wake] : windows) {
        const long long a = to_index(onset), b = to_index(wake);
        for (long long i = std::max(a, 0LL); i < std::min<long long>(b, static_cast<long long>(n)); ++i)
            asleep[static_cast<std::size_t>(i)] = 1;
        if (a > 0 && a < static_cast<long long>(n))
            truth.events.push_back({static_cast<std::size_t>(a), Transition::sleep_onset});
        if (b > 0 && b < static_cast<long long>(n))
            truth.events.push_back({static_cast<std::size_t>(b), Transition::wake_onset});
    }

    std::vector<double> counts(n);
    const double scale_factor = epoch_min;  // per-epoch mass scales with epoch length
    for (std::size_t i = 0; i < n; ++i) {
        const GammaParams& g = asleep[i] ? spec.sleep : spec.wake;
        counts[i] = rng.gamma(g.shape, g.scale * scale_factor);
    }

    std::vector<std::size_t> marker_indices;
    for (const auto& ev : truth.events) {
        const double u = rng.uniform();
        const double noise = rng.normal(0.0, spec.marker_noise_sd);
        if (u < spec.marker_miss_prob) continue;
        long long idx = static_cast<long long>(ev.index) + to_index(noise);
        idx = std::clamp<long long>(idx, 0, static_cast<long long>(n) - 1);
        truth.markers.push_back({static_cast<std::size_t>(idx), ev.label});
        marker_indices.push_back(static_cast<std::size_t>(idx));
    }

    return SynthOutput{make_series(spec.start, spec.epoch_seconds, std::move(counts), std::move(marker_indices)),
                       std::move(truth)};
}

}  // namespace circacp
