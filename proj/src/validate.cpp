#include "circacp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "circacp/error.hpp"

namespace circacp {

namespace {

// Night a timing belongs to: the calendar day of (ts - 12 h).
std::int64_t night_of(Timestamp ts) { return ts.plus_seconds(-12 * 3600).day_number(); }

}  // namespace

double to_minutes_since_midnight(Timestamp ts, Transition label, double noon_cutoff_minutes) {
    const double m = ts.minute_of_day();
    if (label == Transition::sleep_onset && m < noon_cutoff_minutes) return m + 1440.0;
    return m;
}

std::vector<ValidationPair> match_markers(std::span<const ChangePointEvent> events, std::span<const Timestamp> markers,
                                          const MatchOptions& opts, const std::string& subject_id) {
    const double window_s = opts.window_minutes * 60.0;
    auto distance = [&](std::size_t e, std::size_t m) {
        return std::abs(static_cast<double>(markers[m].seconds - events[e].wall_time.seconds));
    };

    // preference lists
    std::vector<std::vector<std::size_t>> prefs(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
        for (std::size_t m = 0; m < markers.size(); ++m)
            if (distance(e, m) <= window_s) prefs[e].push_back(m);
        const bool latest_first = events[e].label == Transition::sleep_onset;
        std::stable_sort(prefs[e].begin(), prefs[e].end(), [&](std::size_t a, std::size_t b) {
            return latest_first ? markers[a] > markers[b] : markers[a] < markers[b];
        });
    }

    // deferred acceptance: events propose, markers keep the nearest proposer
    std::vector<std::size_t> next(events.size(), 0);
    std::map<std::size_t, std::size_t> holder;  // marker -> event
    std::deque<std::size_t> free_events;
    for (std::size_t e = 0; e < events.size(); ++e) free_events.push_back(e);
    while (!free_events.empty()) {
        const std::size_t e = free_events.front();
        free_events.pop_front();
        if (next[e] >= prefs[e].size()) continue;
        const std::size_t m = prefs[e][next[e]++];
        auto it = holder.find(m);
        if (it == holder.end()) {
            holder.emplace(m, e);
            continue;
        }
        const std::size_t rival = it->second;
        const double de = distance(e, m), dr = distance(rival, m);
        if (de < dr || (de == dr && e < rival)) {
            it->second = e;
            free_events.push_back(rival);
        } else {
            free_events.push_back(e);
        }
    }

    std::vector<std::size_t> matched(events.size(), markers.size());
    for (const auto& [m, e] : holder) matched[e] = m;

    const std::int64_t first_night = events.empty() ? 0 : night_of(events.front().wall_time);
    std::vector<ValidationPair> pairs;
    for (std::size_t e = 0; e < events.size(); ++e) {
        if (matched[e] == markers.size()) continue;
        const auto& ev = events[e];
        ValidationPair p;
        p.subject_id = subject_id;
        p.day_index = static_cast<int>(night_of(ev.wall_time) - first_night);
        p.label = ev.label;
        p.estimated_time = ev.wall_time;
        p.marker_time = markers[matched[e]];
        p.estimated_min = to_minutes_since_midnight(ev.wall_time, ev.label, opts.noon_cutoff_minutes);
        p.marker_min = to_minutes_since_midnight(p.marker_time, ev.label, opts.noon_cutoff_minutes);
        p.diff = p.estimated_min - p.marker_min;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

AgreementStats agreement_stats(std::span<const double> diffs) {
    if (diffs.size() < 2) throw InvalidInput("Bland-Altman analysis needs at least two pairs");
    const double n = static_cast<double>(diffs.size());
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= n;
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return AgreementStats{diffs.size(), mean, sd, mean - 1.96 * sd, mean + 1.96 * sd};
}

AgreementReport bland_altman(std::span<const ValidationPair> pairs) {
    std::vector<double> all, sot, wot;
    for (const auto& p : pairs) {
        all.push_back(p.diff);
        (p.label == Transition::sleep_onset ? sot : wot).push_back(p.diff);
    }
    AgreementReport report;
    report.overall = agreement_stats(all);
    if (sot.size() >= 2) report.sot = agreement_stats(sot);
    if (wot.size() >= 2) report.wot = agreement_stats(wot);
    return report;
}

VarianceShares variance_summary(std::span<const Observation> obs) {
    std::map<std::string, std::set<int>> days_per_subject;
    for (const auto& o : obs) days_per_subject[o.subject].insert(o.day);
    if (days_per_subject.size() < 2) throw InvalidInput("variance summary needs at least two subjects");
    for (const auto& [subject, days] : days_per_subject)
        if (days.size() < 2) throw InvalidInput("subject '" + subject + "' has fewer than two days");

    struct Acc {
        double sum = 0.0;
        double n = 0.0;
        double mean() const { return sum / n; }
    };
    Acc grand;
    std::map<std::string, Acc> by_method;
    for (const auto& o : obs) {
        grand.sum += o.value;
        grand.n += 1.0;
        by_method[o.method].sum += o.value;
        by_method[o.method].n += 1.0;
    }
    const double g = grand.mean();

    double ss_method = 0.0;
    for (const auto& [m, a] : by_method) ss_method += a.n * (a.mean() - g) * (a.mean() - g);

    // method effect removed before the nested subject / day / residual split
    std::vector<double> adjusted(obs.size());
    std::map<std::string, Acc> by_subject;
    std::map<std::pair<std::string, int>, Acc> by_day;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        adjusted[i] = obs[i].value - (by_method[obs[i].method].mean() - g);
        by_subject[obs[i].subject].sum += adjusted[i];
        by_subject[obs[i].subject].n += 1.0;
        auto& d = by_day[{obs[i].subject, obs[i].day}];
        d.sum += adjusted[i];
        d.n += 1.0;
    }
    double ss_subject = 0.0, ss_day = 0.0, ss_resid = 0.0;
    for (const auto& [s, a] : by_subject) ss_subject += a.n * (a.mean() - g) * (a.mean() - g);
    for (const auto& [key, a] : by_day) {
        const double sm = by_subject[key.first].mean();
        ss_day += a.n * (a.mean() - sm) * (a.mean() - sm);
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double dm = by_day[{obs[i].subject, obs[i].day}].mean();
        ss_resid += (adjusted[i] - dm) * (adjusted[i] - dm);
    }

    VarianceShares out;
    const double total = ss_method + ss_subject + ss_day + ss_resid;
    const double scale = std::max(1.0, g * g) * grand.n;
    if (!(total > 1e-20 * scale)) return out;
    out.defined = true;
    out.method = 100.0 * ss_method / total;
    out.subject = 100.0 * ss_subject / total;
    out.day = 100.0 * ss_day / total;
    out.residual = 100.0 * ss_resid / total;
    return out;
}

std::vector<Observation> observations_from_pairs(std::span<const ValidationPair> pairs, Transition label) {
    std::vector<Observation> out;
    for (const auto& p : pairs) {
        if (p.label != label) continue;
        out.push_back({p.subject_id, p.day_index, "algorithm", p.estimated_min});
        out.push_back({p.subject_id, p.day_index, "marker", p.marker_min});
    }
    return out;
}

}  // namespace circacp
