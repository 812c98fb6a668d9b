#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "circacp/error.hpp"
#include "circacp/ingest.hpp"
#include "circacp/random.hpp"

using namespace circacp;

namespace {

EpochSeries minutes_of(std::vector<double> counts) { return make_series(Timestamp{}, 60, std::move(counts)); }

std::vector<double> blocks(std::initializer_list<std::pair<std::size_t, double>> runs) {
    std::vector<double> out;
    for (const auto& [len, value] : runs) out.insert(out.end(), len, value);
    return out;
}

// Random series made of alternating nonzero stretches and zero-runs of varied length.
std::vector<double> random_runs(Rng& rng, std::size_t pieces) {
    std::vector<double> out;
    for (std::size_t p = 0; p < pieces; ++p) {
        const auto len = static_cast<std::size_t>(1 + rng.uniform() * 300);
        const bool zero = rng.uniform() < 0.5;
        for (std::size_t i = 0; i < len; ++i) out.push_back(zero ? 0.0 : 1.0 + rng.uniform() * 100);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_series maps counts and markers in file order", "[ingest]") {
    const auto s = parse_series("timestamp,count,marker\n"
                                "2024-03-01T22:00,0,0\n"
                                "2024-03-01T22:01,5,1\n"
                                "2024-03-01T22:02,12,0\n");
    REQUIRE(s.size() == 3);
    CHECK(s.counts == std::vector<double>{0, 5, 12});
    CHECK(s.markers == std::vector<std::size_t>{1});
    CHECK(s.epoch_seconds == 60);
    CHECK(format_timestamp(s.start_time) == "2024-03-01T22:00");
}

TEST_CASE("parse_series infers 30-second epochs and honours custom columns", "[ingest]") {
    ColumnMapping fmt;
    fmt.timestamp_column = "time";
    fmt.count_column = "activity";
    fmt.marker_column = "";
    fmt.delimiter = ';';
    const auto s = parse_series("time;activity;other\n"
                                "2024-03-01 00:00:00;1.5;x\n"
                                "2024-03-01 00:00:30;2;y\n",
                                fmt);
    CHECK(s.epoch_seconds == 30);
    CHECK(s.counts == std::vector<double>{1.5, 2});
    CHECK(s.markers.empty());
}

TEST_CASE("parse_series without timestamps uses the configured start", "[ingest]") {
    ColumnMapping fmt;
    fmt.default_start = parse_timestamp("2024-01-01T08:00");
    const auto s = parse_series("count\n1\n2\n", fmt);
    CHECK(s.start_time == fmt.default_start);
    CHECK(s.epoch_seconds == 60);
}

TEST_CASE("parse_series reports the offending line", "[ingest][errors]") {
    const std::string bad_count = "count,marker\n1,0\nabc,0\n";
    try {
        parse_series(bad_count);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_series("count\n1\n-2\n"), ParseError);
    CHECK_THROWS_AS(parse_series("timestamp,count\n2024-01-01T00:00,1\n2024-01-01T00:01,1\n2024-01-01T00:03,1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_series("timestamp,count\n2024-01-01T00:00,1\n2024-01-01T00:02,1\n"), ParseError);
    CHECK_THROWS_AS(parse_series("value\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_series(""), ParseError);
    CHECK_THROWS_AS(parse_series("count\n"), ParseError);
    CHECK_THROWS_AS(parse_series("count,marker\n1\n"), ParseError);
}

TEST_CASE("make_series enforces its invariants", "[ingest][errors]") {
    CHECK_THROWS_AS(make_series(Timestamp{}, 45, {1.0}), InvalidInput);
    CHECK_THROWS_AS(make_series(Timestamp{}, 60, {}), InvalidInput);
    CHECK_THROWS_AS(make_series(Timestamp{}, 60, {1.0, -1.0}), InvalidInput);
    CHECK_THROWS_AS(make_series(Timestamp{}, 60, {1.0}, {1}), InvalidInput);
    const auto s = make_series(Timestamp{}, 60, {1, 2, 3}, {2, 0, 2});
    CHECK(s.markers == std::vector<std::size_t>{0, 2});
}

TEST_CASE("zero-runs longer than the limit split wear periods", "[ingest]") {
    const auto split = find_wear_periods(minutes_of(blocks({{100, 3}, {130, 0}, {100, 4}})));
    REQUIRE(split.size() == 2);
    CHECK(split[0] == WearPeriod{0, 99, 100});
    CHECK(split[1] == WearPeriod{230, 329, 100});

    const auto joined = find_wear_periods(minutes_of(blocks({{100, 3}, {120, 0}, {100, 4}})));
    REQUIRE(joined.size() == 1);
    CHECK(joined[0].length_minutes == 320);

    CHECK(find_wear_periods(minutes_of(std::vector<double>(200, 0.0))).empty());
    CHECK(find_wear_periods(minutes_of(std::vector<double>(50, 0.0))).empty());
}

TEST_CASE("zero-run limit is measured in minutes at 30-second epochs", "[ingest]") {
    // 241 zero epochs = 120.5 minutes
    auto counts = blocks({{10, 1}, {241, 0}, {10, 1}});
    const auto s = make_series(Timestamp{}, 30, counts);
    CHECK(find_wear_periods(s).size() == 2);
    counts = blocks({{10, 1}, {240, 0}, {10, 1}});
    CHECK(find_wear_periods(make_series(Timestamp{}, 30, counts)).size() == 1);
}

TEST_CASE("wear periods and over-long zero-runs partition the series", "[ingest][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = minutes_of(random_runs(rng, 2 + trial % 15));
        const auto periods = find_wear_periods(s);
        std::size_t cursor = 0;
        auto check_gap = [&](std::size_t from, std::size_t to) {
            if (from == to) return;
            for (std::size_t i = from; i < to; ++i) REQUIRE(s.counts[i] == 0.0);
            // a gap either exceeds the limit or is the whole (all-zero) series
            REQUIRE((to - from > 120 || (periods.empty() && from == 0 && to == s.size())));
        };
        for (const auto& p : periods) {
            REQUIRE(p.start_index <= p.end_index);
            check_gap(cursor, p.start_index);
            cursor = p.end_index + 1;

            // restriction is idempotent
            const auto sub = crop(s, p);
            const auto again = find_wear_periods(sub);
            REQUIRE(again.size() == 1);
            REQUIRE(again[0] == WearPeriod{0, p.length() - 1, p.length_minutes});
        }
        check_gap(cursor, s.size());
    }
}

TEST_CASE("screen applies the total and wear-period thresholds", "[ingest]") {
    const auto short_series = minutes_of(std::vector<double>(5000, 7.0));
    auto r = screen(short_series);
    CHECK_FALSE(r.passed);
    CHECK(r.reason == ScreenFailure::too_short_total);

    const auto good = minutes_of(blocks({{1000, 0}, {6000, 5}, {1000, 0}}));
    r = screen(good);
    CHECK(r.passed);
    REQUIRE(r.longest_wear);
    CHECK(r.longest_wear->length_minutes == 6000);
    CHECK(r.longest_wear->start_index == 1000);

    const auto fragmented = minutes_of(blocks({{3000, 5}, {500, 0}, {4500, 5}}));
    r = screen(fragmented);
    CHECK_FALSE(r.passed);
    CHECK(r.reason == ScreenFailure::no_long_wear_period);
    CHECK(r.longest_wear->length_minutes == 4500);

    const auto zeros = minutes_of(std::vector<double>(8000, 0.0));
    r = screen(zeros);
    CHECK_FALSE(r.passed);
    CHECK(r.reason == ScreenFailure::no_long_wear_period);
    CHECK_FALSE(r.longest_wear);

    // boundary: exactly 5760 passes
    CHECK(screen(minutes_of(std::vector<double>(5760, 1.0))).passed);
}

TEST_CASE("a passing series' longest wear period passes on its own", "[ingest][property]") {
    Rng rng(3);
    int passed = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto counts = random_runs(rng, 10);
        counts.insert(counts.end(), static_cast<std::size_t>(5000 + rng.uniform() * 3000), 4.0);
        const auto more = random_runs(rng, 10);
        counts.insert(counts.end(), more.begin(), more.end());
        const auto s = minutes_of(counts);
        const auto r = screen(s);
        if (!r.passed) continue;
        ++passed;
        REQUIRE(screen(crop(s, *r.longest_wear)).passed);
    }
    CHECK(passed > 10);
}

TEST_CASE("aggregate sums epoch pairs", "[ingest]") {
    const auto s = make_series(Timestamp{}, 30, {3, 5, 0, 7}, {2});
    const auto a = aggregate(s);
    CHECK(a.epoch_seconds == 60);
    CHECK(a.counts == std::vector<double>{8, 7});
    CHECK(a.markers == std::vector<std::size_t>{1});

    std::vector<std::string> warnings;
    const auto odd = aggregate(make_series(Timestamp{}, 30, {1, 2, 3, 4, 5}, {4}), &warnings);
    CHECK(odd.counts == std::vector<double>{3, 7});
    CHECK(odd.markers.empty());
    CHECK(warnings.size() == 1);

    CHECK_THROWS_AS(aggregate(a), InvalidInput);
}

TEST_CASE("aggregate preserves mass up to the dropped epoch", "[ingest][property]") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> counts(static_cast<std::size_t>(2 + rng.uniform() * 500));
        for (auto& c : counts) c = std::floor(rng.uniform() * 50);
        const auto s = make_series(Timestamp{}, 30, counts);
        const double before = std::accumulate(counts.begin(), counts.end() - (counts.size() % 2), 0.0);
        const auto a = aggregate(s);
        REQUIRE(std::accumulate(a.counts.begin(), a.counts.end(), 0.0) == before);
    }
}

TEST_CASE("crop shifts start time and markers", "[ingest]") {
    const auto s = make_series(parse_timestamp("2024-01-01T00:00"), 60, {1, 2, 3, 4, 5}, {0, 2, 4});
    const auto c = crop(s, WearPeriod{1, 3, 3});
    CHECK(c.counts == std::vector<double>{2, 3, 4});
    CHECK(c.markers == std::vector<std::size_t>{1});
    CHECK(format_timestamp(c.start_time) == "2024-01-01T00:01");
    CHECK_THROWS_AS(crop(s, WearPeriod{2, 5, 4}), InvalidInput);
}
