#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "circacp/error.hpp"
#include "circacp/random.hpp"
#include "circacp/validate.hpp"

using namespace circacp;
using Catch::Matchers::WithinAbs;

namespace {

const Timestamp kBase = parse_timestamp("2024-01-01T00:00");

Timestamp at(double minutes) { return kBase.plus_minutes(minutes); }

ChangePointEvent event_at(double minutes, Transition label) { return {0, at(minutes), label, {}}; }

std::vector<ValidationPair> pairs_with(std::initializer_list<double> diffs) {
    std::vector<ValidationPair> out;
    for (double d : diffs) {
        ValidationPair p;
        p.diff = d;
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("SOT takes the latest marker, WOT the earliest", "[validate]") {
    const std::vector<Timestamp> markers{at(900), at(980)};
    const std::vector<ChangePointEvent> sot{event_at(1000, Transition::sleep_onset)};
    auto pairs = match_markers(sot, markers);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].marker_time == at(980));

    const std::vector<Timestamp> wake_markers{at(1990), at(2100)};
    const std::vector<ChangePointEvent> wot{event_at(2000, Transition::wake_onset)};
    pairs = match_markers(wot, wake_markers);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].marker_time == at(1990));
    CHECK_THAT(pairs[0].diff, WithinAbs(10, 1e-9));

    const std::vector<Timestamp> far{at(1200)};
    CHECK(match_markers(sot, far).empty());
    const std::vector<Timestamp> edge{at(1180)};
    CHECK(match_markers(sot, edge).size() == 1);
}

TEST_CASE("a contested marker goes to the nearer event", "[validate]") {
    const std::vector<ChangePointEvent> events{event_at(1000, Transition::sleep_onset),
                                               event_at(1100, Transition::wake_onset)};
    const std::vector<Timestamp> one{at(1090)};
    auto pairs = match_markers(events, one);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].label == Transition::wake_onset);

    // the loser falls back to its next candidate
    const std::vector<ChangePointEvent> wakes{event_at(1100, Transition::wake_onset),
                                              event_at(1200, Transition::wake_onset)};
    const std::vector<Timestamp> two{at(1090), at(1150)};
    pairs = match_markers(wakes, two, {}, "s1");
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].marker_time == at(1090));
    CHECK(pairs[1].marker_time == at(1150));
    CHECK(pairs[0].subject_id == "s1");
}

TEST_CASE("pairs carry clock minutes and night numbers", "[validate]") {
    // SOT 23:30 on Jan 1, WOT 07:10 on Jan 2, SOT 00:20 on Jan 3
    const std::vector<ChangePointEvent> events{event_at(1410, Transition::sleep_onset),
                                               event_at(1440 + 430, Transition::wake_onset),
                                               event_at(2880 + 20, Transition::sleep_onset)};
    const std::vector<Timestamp> markers{at(1400), at(1440 + 440), at(2880 - 10)};
    const auto pairs = match_markers(events, markers);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].day_index == 0);
    CHECK(pairs[1].day_index == 0);
    CHECK(pairs[2].day_index == 1);
    CHECK(pairs[0].estimated_min == 1410);
    CHECK(pairs[1].estimated_min == 430);
    CHECK(pairs[2].estimated_min == 1460);
    CHECK(pairs[2].marker_min == 1430);
    CHECK(pairs[2].diff == 30);
}

TEST_CASE("minutes since midnight with the after-midnight shift", "[validate]") {
    CHECK(to_minutes_since_midnight(parse_timestamp("2024-01-02T00:30"), Transition::sleep_onset) == 1470);
    CHECK(to_minutes_since_midnight(parse_timestamp("2024-01-01T23:23"), Transition::sleep_onset) == 1403);
    CHECK(to_minutes_since_midnight(parse_timestamp("2024-01-02T06:45"), Transition::wake_onset) == 405);
    CHECK(to_minutes_since_midnight(parse_timestamp("2024-01-02T00:30"), Transition::wake_onset) == 30);
    CHECK(to_minutes_since_midnight(parse_timestamp("2024-01-02T12:00"), Transition::sleep_onset) == 720);
}

TEST_CASE("minutes since midnight inverts midnight plus minutes", "[validate][property]") {
    for (int m = 0; m < 1440; ++m) {
        REQUIRE(to_minutes_since_midnight(at(m), Transition::wake_onset) == m);
        if (m >= 720) REQUIRE(to_minutes_since_midnight(at(m), Transition::sleep_onset) == m);
    }
}

TEST_CASE("matching keeps markers unique and within the window", "[validate][property]") {
    Rng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ChangePointEvent> events;
        std::vector<Timestamp> markers;
        const int ne = static_cast<int>(rng.uniform() * 15), nm = static_cast<int>(rng.uniform() * 15);
        for (int i = 0; i < ne; ++i)
            events.push_back(event_at(std::floor(rng.uniform() * 5000),
                                      rng.uniform() < 0.5 ? Transition::sleep_onset : Transition::wake_onset));
        std::sort(events.begin(), events.end(), [](auto& a, auto& b) { return a.wall_time < b.wall_time; });
        for (int i = 0; i < nm; ++i) markers.push_back(at(std::floor(rng.uniform() * 5000)));
        MatchOptions opts;
        opts.window_minutes = 30 + rng.uniform() * 300;
        const auto pairs = match_markers(events, markers, opts);
        REQUIRE(pairs.size() <= std::min(events.size(), markers.size()));
        std::multiset<std::int64_t> free_markers;
        for (const auto& m : markers) free_markers.insert(m.seconds);
        for (const auto& p : pairs) {
            REQUIRE(std::abs(minutes_between(p.estimated_time, p.marker_time)) <= opts.window_minutes);
            auto it = free_markers.find(p.marker_time.seconds);
            REQUIRE(it != free_markers.end());
            free_markers.erase(it);
        }
    }
}

TEST_CASE("Bland-Altman hand-computed cases", "[validate]") {
    const auto r = bland_altman(pairs_with({-2, 0, 2}));
    CHECK(r.overall.n == 3);
    CHECK_THAT(r.overall.bias, WithinAbs(0, 1e-12));
    CHECK_THAT(r.overall.sd, WithinAbs(2, 1e-12));
    CHECK_THAT(r.overall.loa_low, WithinAbs(-3.92, 1e-12));
    CHECK_THAT(r.overall.loa_high, WithinAbs(3.92, 1e-12));

    const auto c = agreement_stats(std::vector<double>{4.5, 4.5, 4.5});
    CHECK(c.bias == 4.5);
    CHECK(c.sd == 0);
    CHECK(c.loa_low == 4.5);
    CHECK(c.loa_high == 4.5);

    CHECK_THROWS_AS(agreement_stats(std::vector<double>{1}), InvalidInput);
}

TEST_CASE("Bland-Altman splits by label", "[validate]") {
    auto pairs = pairs_with({1, 2, 3, 10, 20});
    for (std::size_t i = 3; i < pairs.size(); ++i) pairs[i].label = Transition::wake_onset;
    pairs[0].label = Transition::wake_onset;
    const auto r = bland_altman(pairs);
    REQUIRE(r.sot);
    REQUIRE(r.wot);
    CHECK(r.sot->n == 2);
    CHECK(r.sot->bias == 2.5);
    CHECK(r.wot->n == 3);
    const auto only_one = bland_altman(pairs_with({1, 2}));
    CHECK(only_one.sot);
    CHECK_FALSE(only_one.wot);
}

TEST_CASE("Bland-Altman ignores pair order", "[validate][property]") {
    Rng rng(8);
    std::vector<double> d(40);
    for (auto& v : d) v = rng.normal(3, 12);
    const auto base = agreement_stats(d);
    std::mt19937_64 shuffler(1);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(d.begin(), d.end(), shuffler);
        const auto s = agreement_stats(d);
        REQUIRE_THAT(s.bias, WithinAbs(base.bias, 1e-12));
        REQUIRE_THAT(s.sd, WithinAbs(base.sd, 1e-12));
    }
}

TEST_CASE("variance summary degenerate and single-source cases", "[validate]") {
    std::vector<Observation> flat;
    for (const char* s : {"a", "b"})
        for (int d = 0; d < 3; ++d)
            for (const char* m : {"algorithm", "marker"}) flat.push_back({s, d, m, 1400});
    const auto none = variance_summary(flat);
    CHECK_FALSE(none.defined);
    CHECK(none.method + none.subject + none.day + none.residual == 0);

    auto shifted = flat;
    for (auto& o : shifted)
        if (o.method == "marker") o.value += 12;
    const auto only_method = variance_summary(shifted);
    CHECK(only_method.defined);
    CHECK_THAT(only_method.method, WithinAbs(100, 1e-9));
    CHECK_THAT(only_method.subject + only_method.day + only_method.residual, WithinAbs(0, 1e-9));

    CHECK_THROWS_AS(variance_summary(std::vector<Observation>{{"a", 0, "m", 1}, {"a", 1, "m", 2}}), InvalidInput);
    CHECK_THROWS_AS(variance_summary(std::vector<Observation>{{"a", 0, "m", 1}, {"b", 0, "m", 2}, {"b", 1, "m", 2}}),
                    InvalidInput);
}

TEST_CASE("planted subject offsets dominate the variance", "[validate][property]") {
    Rng rng(21);
    std::vector<Observation> obs;
    for (int s = 0; s < 12; ++s) {
        const double offset = rng.normal(0, 60);
        for (int d = 0; d < 7; ++d) {
            const double night = rng.normal(0, 10);
            for (const char* m : {"algorithm", "marker"})
                obs.push_back({"s" + std::to_string(s), d, m, 1400 + offset + night + rng.normal(0, 5)});
        }
    }
    const auto v = variance_summary(obs);
    CHECK(v.subject > 50);
}

TEST_CASE("variance shares are non-negative and sum to 100", "[validate][property]") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Observation> obs;
        const int subjects = 2 + static_cast<int>(rng.uniform() * 5);
        for (int s = 0; s < subjects; ++s) {
            const int days = 2 + static_cast<int>(rng.uniform() * 6);
            for (int d = 0; d < days; ++d)
                for (const char* m : {"a", "b"})
                    if (rng.uniform() < 0.9 || d < 2) obs.push_back({std::to_string(s), d, m, rng.normal(0, 1 + trial)});
        }
        const auto v = variance_summary(obs);
        REQUIRE(v.defined);
        REQUIRE(v.method >= 0);
        REQUIRE(v.subject >= 0);
        REQUIRE(v.day >= 0);
        REQUIRE(v.residual >= 0);
        REQUIRE_THAT(v.method + v.subject + v.day + v.residual, WithinAbs(100, 1e-9));
    }
}

TEST_CASE("observations come in method pairs", "[validate]") {
    std::vector<ValidationPair> pairs(3);
    pairs[0].label = Transition::wake_onset;
    pairs[1].estimated_min = 5;
    pairs[1].marker_min = 7;
    const auto obs = observations_from_pairs(pairs, Transition::sleep_onset);
    REQUIRE(obs.size() == 4);
    CHECK(obs[0].method == "algorithm");
    CHECK(obs[0].value == 5);
    CHECK(obs[1].method == "marker");
    CHECK(obs[1].value == 7);
}
