#include "circacp/detector.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "circacp/error.hpp"
#include "circacp/gamma.hpp"

namespace circacp {

std::string_view to_string(Transition t) { return t == Transition::sleep_onset ? "SOT" : "WOT"; }

Transition parse_transition(std::string_view text) {
    if (text == "SOT") return Transition::sleep_onset;
    if (text == "WOT") return Transition::wake_onset;
    throw ParseError("unknown label '" + std::string(text) + "' (expected SOT or WOT)");
}

std::string to_string(Provenance p) {
    return p.pass == 0 ? std::string("cosinor-boundary") : "cp-pass" + std::to_string(p.pass);
}

std::vector<ChangePointEvent> refine_pass(std::span<const double> y, std::span<const ChangePointEvent> anchors,
                                          const DetectionConfig& cfg, int pass, double epoch_minutes,
                                          std::vector<std::string>* notes) {
    const std::size_t n = y.size();
    const std::size_t m = anchors.size();
    const double guard = cfg.edge_guard_minutes / epoch_minutes;
    const std::size_t margin = std::max<std::size_t>(cfg.min_margin, 1);
    const std::size_t min_segment = std::max(2 * margin + 2, kGammaMinSamples);

    auto search = [&](std::size_t begin, std::size_t end) -> std::optional<std::size_t> {
        if (end <= begin || end - begin < min_segment) {
            if (notes)
                notes->push_back("pass " + std::to_string(pass) + ": segment [" + std::to_string(begin) + ", " +
                                 std::to_string(end) + ") too short to search; kept previous boundary");
            return std::nullopt;
        }
        const auto r = find_single_cp(y.subspan(begin, end - begin), cfg.lambda, margin);
        return begin + r.k_hat;
    };

    std::vector<ChangePointEvent> out(anchors.begin(), anchors.end());
    auto settle = [&](std::size_t i, std::optional<std::size_t> found) {
        if (found) {
            out[i].index = *found;
            out[i].provenance = Provenance{pass};
        }
    };

    // first change point: searched up to the second boundary when enough data precede it
    if (static_cast<double>(anchors[0].index) > guard) settle(0, search(0, m > 1 ? anchors[1].index : n));

    // interior: from the previous refined point to the next anchor
    for (std::size_t i = 1; i + 1 < m; ++i) settle(i, search(out[i - 1].index, anchors[i + 1].index));

    // last change point: searched to the end of the series when enough data follow it
    if (m > 1 && static_cast<double>(n - anchors[m - 1].index) > guard)
        settle(m - 1, search(out[m - 2].index, n));

    return out;
}

std::vector<int> states_from_events(std::span<const ChangePointEvent> events, std::size_t n) {
    std::vector<ChangePointEvent> ordered(events.begin(), events.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.index < b.index; });
    auto state_after = [](Transition t) { return t == Transition::sleep_onset ? 0 : 1; };

    std::vector<int> states(n, 1);
    if (ordered.empty()) return states;
    int current = 1 - state_after(ordered.front().label);
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (e < ordered.size() && ordered[e].index <= i) current = state_after(ordered[e++].label);
        states[i] = current;
    }
    return states;
}

double ch_index(std::span<const double> counts, std::span<const int> states) {
    if (counts.size() != states.size()) throw InvalidInput("ch_index: counts and states differ in length");
    double sum[2] = {0.0, 0.0};
    std::size_t size[2] = {0, 0};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const int s = states[i] ? 1 : 0;
        sum[s] += counts[i];
        ++size[s];
    }
    if (size[0] == 0 || size[1] == 0) throw InvalidInput("ch_index: both states must be present");

    const double n = static_cast<double>(counts.size());
    const double mean[2] = {sum[0] / static_cast<double>(size[0]), sum[1] / static_cast<double>(size[1])};
    const double grand = (sum[0] + sum[1]) / n;
    double ssw = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double d = counts[i] - mean[states[i] ? 1 : 0];
        ssw += d * d;
    }
    double ssb = 0.0;
    for (int k = 0; k < 2; ++k) ssb += static_cast<double>(size[k]) * (mean[k] - grand) * (mean[k] - grand);

    if (ssb == 0.0) return 0.0;
    if (ssw == 0.0) return kChPerfectSeparation;
    constexpr double clusters = 2.0;
    return (ssb / ssw) * (n - clusters) / (clusters - 1.0);
}

bool flag_errors(double ch_refined, double ch_cosinor, double threshold) {
    const double gain = ch_refined - ch_cosinor;
    return gain < threshold;  // NaN (both infinite) compares false
}

DetectionResult detect(const EpochSeries& s, const DetectionConfig& cfg) {
    if (s.epoch_seconds != 60) throw InvalidInput("detection expects 60-second epochs; aggregate first");
    if (cfg.refinement_passes < 1) throw InvalidInput("refinement_passes must be at least 1");

    DetectionResult result;
    result.config = cfg;

    std::vector<double> y(s.counts);
    for (double& v : y) v += cfg.positivity_offset;

    result.cosinor = fit_cosinor(std::span<const double>(y), cfg.cosinor_init);
    if (!result.cosinor.identifiable) throw Degenerate("cosinor amplitude vanishes; no circadian rhythm to follow");
    if (!result.cosinor.converged)
        result.notes.push_back("cosinor fit stopped at the iteration cap before converging");
    result.rough = dichotomize(result.cosinor, cfg.dichotomize_q);
    if (result.rough.boundaries.size() < 2)
        throw Degenerate("fewer than two cosinor boundaries; series holds no complete sleep-wake cycle");

    std::vector<ChangePointEvent> anchors;
    for (auto b : result.rough.boundaries) {
        const Transition label = result.rough.is_wake_edge(b) ? Transition::wake_onset : Transition::sleep_onset;
        anchors.push_back({b, {}, label, Provenance{0}});
    }

    const std::span<const double> ys(y);
    for (int pass = 1; pass <= cfg.refinement_passes; ++pass) {
        anchors = refine_pass(ys, anchors, cfg, pass, s.epoch_minutes(), &result.notes);
        for (auto& e : anchors) e.wall_time = s.time_at(e.index);
        result.passes.push_back(anchors);
    }
    result.events = anchors;

    result.ch_cosinor = ch_index(ys, result.rough.binary);
    result.ch_refined = ch_index(ys, states_from_events(result.events, y.size()));
    result.error_flag = flag_errors(result.ch_refined, result.ch_cosinor, cfg.ch_delta_threshold);
    return result;
}

}  // namespace circacp
