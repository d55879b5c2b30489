#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

#include "arcplan/channel_selection.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace arcplan;

namespace {

ChannelScore make_score(const std::vector<std::int16_t>& vdva) {
    ChannelScore s;
    s.vdva = vdva;
    s.feasible = true;
    s.csv = *std::min_element(vdva.begin(), vdva.end());
    s.min_count = static_cast<std::size_t>(
        std::count(vdva.begin(), vdva.end(), static_cast<std::int16_t>(s.csv)));
    s.vdva_sum = std::accumulate(vdva.begin(), vdva.end(), std::int64_t{0});
    s.sample_count = vdva.size();
    return s;
}

CandidateRef make_candidate(int e, int m, int x, const std::vector<std::int16_t>& vdva) {
    CandidateRef c;
    c.entry_index = e;
    c.middle_index = m;
    c.exit_index = x;
    c.channel = straight_through_points({0, 0, 0}, {1, 0, 0});
    c.score = make_score(vdva);
    return c;
}

CandidateRef make_infeasible(int e, int m, int x) {
    CandidateRef c;
    c.entry_index = e;
    c.middle_index = m;
    c.exit_index = x;
    c.channel = straight_through_points({0, 0, 0}, {1, 0, 0});
    c.score.feasible = false;
    c.score.csv = kInfeasibleCsv;
    return c;
}

std::tuple<int, int, int> indices(const CandidateRef& c) {
    return {c.entry_index, c.middle_index, c.exit_index};
}

// Reference selection: materialize, sort by the documented total order.
const CandidateRef* oracle_best(const std::vector<CandidateRef>& cands, int min_csv) {
    const CandidateRef* best = nullptr;
    auto better = [](const CandidateRef& a, const CandidateRef& b) {
        if (a.score.csv != b.score.csv) return a.score.csv > b.score.csv;
        if (a.score.min_count != b.score.min_count) return a.score.min_count < b.score.min_count;
        const std::int64_t lhs = a.score.vdva_sum * static_cast<std::int64_t>(b.score.sample_count);
        const std::int64_t rhs = b.score.vdva_sum * static_cast<std::int64_t>(a.score.sample_count);
        if (lhs != rhs) return lhs > rhs;
        return indices(a) < indices(b);
    };
    for (const CandidateRef& c : cands) {
        if (!c.score.feasible || c.score.csv < min_csv) continue;
        if (!best || better(c, *best)) best = &c;
    }
    return best;
}

SeedLattices grid_lattices(int n_entry, int n_middle, int n_exit) {
    SeedLattices lat;
    for (int i = 0; i < n_entry; ++i) lat.entry_points.push_back({{0.0, double(i), 0.0}, i, 0});
    for (int i = 0; i < n_middle; ++i) lat.middle_points.push_back({{5.0, double(i), 3.0}, i, 0});
    for (int i = 0; i < n_exit; ++i) lat.exit_points.push_back({{10.0, double(i), 0.0}, i, 0});
    return lat;
}

} // namespace

TEST_CASE("stage 1 prefers the highest safety value") {
    std::vector<CandidateRef> cands = {
        make_candidate(0, 0, 0, {1, 2, 1}), // A
        make_candidate(0, 0, 1, {1, 1, 2}), // B
        make_candidate(0, 0, 2, {2, 2, 2}), // C
    };
    SelectionResult r = select_best(cands, 0);
    REQUIRE(r.best.has_value());
    CHECK(indices(*r.best) == std::tuple{0, 0, 2});
    CHECK(r.stats.stage1 == 1);
}

TEST_CASE("stage 2 prefers the fewest minimum entries") {
    std::vector<CandidateRef> cands = {
        make_candidate(0, 0, 0, {2, 3, 2}), // min_count 2
        make_candidate(0, 0, 1, {2, 3, 3}), // min_count 1
    };
    SelectionResult r = select_best(cands, 0);
    REQUIRE(r.best.has_value());
    CHECK(indices(*r.best) == std::tuple{0, 0, 1});
    CHECK(r.stats.stage1 == 2);
    CHECK(r.stats.stage2 == 1);
}

TEST_CASE("stage 3 prefers the higher mean") {
    std::vector<CandidateRef> cands = {
        make_candidate(0, 0, 0, {2, 3, 4}), // mean 3
        make_candidate(0, 0, 1, {2, 4, 4}), // mean 10/3
    };
    SelectionResult r = select_best(cands, 0);
    REQUIRE(r.best.has_value());
    CHECK(indices(*r.best) == std::tuple{0, 0, 1});
    CHECK(r.stats.stage1 == 2);
    CHECK(r.stats.stage2 == 2);
    CHECK(r.stats.stage3 == 1);
}

TEST_CASE("full ties fall back to the lowest index tuple") {
    std::vector<CandidateRef> cands = {
        make_candidate(0, 1, 2, {2, 3, 4}),
        make_candidate(0, 0, 5, {2, 3, 4}),
        make_candidate(1, 0, 0, {2, 3, 4}),
    };
    SelectionResult r = select_best(cands, 0);
    REQUIRE(r.best.has_value());
    CHECK(indices(*r.best) == std::tuple{0, 0, 5});
    CHECK(r.stats.stage1 == 3);
    CHECK(r.stats.stage2 == 3);
    CHECK(r.stats.stage3 == 3);
}

TEST_CASE("a singleton selects itself") {
    SelectionResult r = select_best({make_candidate(3, 1, 4, {1, 1})}, 0);
    REQUIRE(r.best.has_value());
    CHECK(indices(*r.best) == std::tuple{3, 1, 4});
    CHECK(r.stats.feasible == 1);
    CHECK(r.stats.stage1 == 1);
}

TEST_CASE("the minimum safety cutoff can reject everything") {
    std::vector<CandidateRef> cands = {
        make_candidate(0, 0, 0, {0, 1, 0}),
        make_candidate(0, 0, 1, {0, 2, 2}),
    };
    CHECK_FALSE(select_best(cands, 1).best.has_value());
    REQUIRE(select_best(cands, 0).best.has_value());
    CHECK(select_best(cands, 0).best->score.csv == 0);

    CHECK_FALSE(select_best({make_infeasible(0, 0, 0)}, 0).best.has_value());
    CHECK_FALSE(select_best({}, 0).best.has_value());
}

TEST_CASE("streaming selection matches the sort-based reference") {
    std::mt19937 rng(340221);
    std::uniform_int_distribution<int> len(3, 8);
    std::uniform_int_distribution<int> val(0, 4);
    std::bernoulli_distribution broken(0.15);

    for (int round = 0; round < 20; ++round) {
        std::vector<CandidateRef> cands;
        for (int i = 0; i < 120; ++i) {
            const int e = i % 5, m = (i / 5) % 5, x = i / 25;
            if (broken(rng)) {
                cands.push_back(make_infeasible(e, m, x));
                continue;
            }
            std::vector<std::int16_t> vdva(static_cast<std::size_t>(len(rng)));
            for (auto& v : vdva) v = static_cast<std::int16_t>(val(rng));
            cands.push_back(make_candidate(e, m, x, vdva));
        }

        for (int min_csv : {0, 1, 2}) {
            SelectionResult got = select_best(cands, min_csv);
            const CandidateRef* want = oracle_best(cands, min_csv);
            REQUIRE(got.best.has_value() == (want != nullptr));
            if (!want) continue;
            REQUIRE(indices(*got.best) == indices(*want));

            // the winner dominates every feasible candidate on stage 1
            for (const CandidateRef& c : cands)
                if (c.score.feasible) CHECK(got.best->score.csv >= c.score.csv);
        }

        // survivor counts against direct recounts (cutoff-independent)
        SelectionResult full = select_best(cands, 0);
        if (full.best.has_value()) {
            const ChannelScore& b = full.best->score;
            std::uint64_t s1 = 0, s2 = 0, s3 = 0;
            for (const CandidateRef& c : cands) {
                if (!c.score.feasible || c.score.csv != b.csv) continue;
                ++s1;
                if (c.score.min_count != b.min_count) continue;
                ++s2;
                const std::int64_t lhs =
                    c.score.vdva_sum * static_cast<std::int64_t>(b.sample_count);
                const std::int64_t rhs =
                    b.vdva_sum * static_cast<std::int64_t>(c.score.sample_count);
                if (lhs == rhs) ++s3;
            }
            CHECK(full.stats.stage1 == s1);
            CHECK(full.stats.stage2 == s2);
            CHECK(full.stats.stage3 == s3);
            CHECK(s1 >= s2);
            CHECK(s2 >= s3);
            CHECK(s3 >= 1);
        }
    }
}

TEST_CASE("arrival order never changes the winner or the survivor counts") {
    std::mt19937 rng(118999);
    std::vector<CandidateRef> cands;
    for (int i = 0; i < 60; ++i) {
        std::vector<std::int16_t> vdva = {static_cast<std::int16_t>(1 + (i % 3)),
                                          static_cast<std::int16_t>(2), static_cast<std::int16_t>(3)};
        cands.push_back(make_candidate(i % 4, (i / 4) % 4, i / 16, vdva));
    }
    SelectionResult base = select_best(cands, 0);
    REQUIRE(base.best.has_value());
    for (int shuffle = 0; shuffle < 10; ++shuffle) {
        std::shuffle(cands.begin(), cands.end(), rng);
        SelectionResult r = select_best(cands, 0);
        REQUIRE(r.best.has_value());
        CHECK(indices(*r.best) == indices(*base.best));
        CHECK(r.stats.stage1 == base.stats.stage1);
        CHECK(r.stats.stage2 == base.stats.stage2);
        CHECK(r.stats.stage3 == base.stats.stage3);
        CHECK(r.stats.feasible == base.stats.feasible);
    }
}

TEST_CASE("chunked selectors merge to the single-pass result") {
    std::mt19937 rng(5012);
    std::uniform_int_distribution<int> val(0, 3);
    std::vector<CandidateRef> cands;
    for (int i = 0; i < 91; ++i) {
        std::vector<std::int16_t> vdva(4);
        for (auto& v : vdva) v = static_cast<std::int16_t>(val(rng));
        cands.push_back(make_candidate(i, 0, 0, vdva));
    }
    BestChannelSelector whole;
    for (const CandidateRef& c : cands) whole.add(c);

    for (std::size_t chunks : {1u, 2u, 3u, 4u, 7u}) {
        std::vector<BestChannelSelector> parts(chunks);
        for (std::size_t i = 0; i < cands.size(); ++i)
            parts[i * chunks / cands.size()].add(cands[i]);

        BestChannelSelector merged = parts[0];
        for (std::size_t i = 1; i < chunks; ++i) merged.merge(parts[i]);

        REQUIRE(merged.best(0).has_value());
        CHECK(indices(*merged.best(0)) == indices(*whole.best(0)));
        CHECK(merged.stats().stage1 == whole.stats().stage1);
        CHECK(merged.stats().stage2 == whole.stats().stage2);
        CHECK(merged.stats().stage3 == whole.stats().stage3);
        CHECK(merged.stats().enumerated == whole.stats().enumerated);
        CHECK(merged.stats().feasible == whole.stats().feasible);

        // merging in reverse chunk order picks the same winner
        BestChannelSelector reversed = parts[chunks - 1];
        for (std::size_t i = chunks - 1; i-- > 0;) reversed.merge(parts[i]);
        CHECK(indices(*reversed.best(0)) == indices(*whole.best(0)));
        CHECK(reversed.stats().stage3 == whole.stats().stage3);
    }
}

TEST_CASE("arc enumeration covers the cartesian product in index order") {
    SeedLattices lat = grid_lattices(2, 3, 4);
    SelectionStats stats;
    std::vector<std::tuple<int, int, int>> seen;
    enumerate_arcs(lat, stats, [&](const CandidateRef& c) {
        seen.push_back(indices(c));
        CHECK(c.channel.entry == lat.entry_points[c.entry_index].position);
        CHECK(c.channel.exit == lat.exit_points[c.exit_index].position);
    });
    CHECK(stats.enumerated == 24);
    CHECK(stats.skipped_coincident == 0);
    REQUIRE(seen.size() == 24);
    std::size_t i = 0;
    for (int e = 0; e < 2; ++e)
        for (int m = 0; m < 3; ++m)
            for (int x = 0; x < 4; ++x) CHECK(seen[i++] == std::tuple{e, m, x});
}

TEST_CASE("coincident triples are skipped and counted") {
    SeedLattices lat = grid_lattices(2, 3, 4);
    lat.middle_points[1].position = lat.entry_points[0].position;
    SelectionStats stats;
    std::size_t calls = 0;
    enumerate_arcs(lat, stats, [&](const CandidateRef&) { ++calls; });
    CHECK(stats.enumerated == 24);
    CHECK(stats.skipped_coincident == 4); // entry 0 with middle 1, any of 4 exits
    CHECK(calls == 20);
}

TEST_CASE("straight enumeration pairs entry with exit only") {
    SeedLattices lat = grid_lattices(2, 0, 3); // empty middle set is fine here
    SelectionStats stats;
    std::vector<std::tuple<int, int, int>> seen;
    enumerate_straights(lat, stats, [&](const CandidateRef& c) {
        seen.push_back(indices(c));
        CHECK(c.channel.kind == ChannelKind::straight);
        CHECK(c.middle_index == -1);
    });
    CHECK(stats.enumerated == 6);
    REQUIRE(seen.size() == 6);
    CHECK(seen.front() == std::tuple{0, -1, 0});
    CHECK(seen.back() == std::tuple{1, -1, 2});

    lat.exit_points[2].position = lat.entry_points[1].position;
    SelectionStats stats2;
    std::size_t calls = 0;
    enumerate_straights(lat, stats2, [&](const CandidateRef&) { ++calls; });
    CHECK(stats2.skipped_coincident == 1);
    CHECK(calls == 5);
}

TEST_CASE("range enumeration concatenates to the full sweep") {
    SeedLattices lat = grid_lattices(5, 2, 3);
    SelectionStats full_stats;
    std::vector<std::tuple<int, int, int>> full;
    enumerate_arcs(lat, full_stats, [&](const CandidateRef& c) { full.push_back(indices(c)); });

    SelectionStats part_stats;
    std::vector<std::tuple<int, int, int>> parts;
    enumerate_arcs_range(lat, 0, 2, part_stats, [&](const CandidateRef& c) {
        parts.push_back(indices(c));
    });
    enumerate_arcs_range(lat, 2, 5, part_stats, [&](const CandidateRef& c) {
        parts.push_back(indices(c));
    });
    CHECK(parts == full);
    CHECK(part_stats.enumerated == full_stats.enumerated);

    SelectionStats empty_stats;
    std::size_t calls = 0;
    enumerate_arcs_range(lat, 3, 3, empty_stats, [&](const CandidateRef&) { ++calls; });
    CHECK(calls == 0);
}

TEST_CASE("empty seed sets are rejected") {
    SeedLattices lat = grid_lattices(2, 0, 3);
    SelectionStats stats;
    CHECK_THROWS_WITH_AS(enumerate_arcs(lat, stats, [](const CandidateRef&) {}),
                         doctest::Contains("empty seed set"), Error);
    SeedLattices no_exit = grid_lattices(2, 2, 0);
    CHECK_THROWS_WITH_AS(enumerate_straights(no_exit, stats, [](const CandidateRef&) {}),
                         doctest::Contains("empty seed set"), Error);
}

TEST_CASE("the radius filter passes straights and in-band arcs only") {
    RadiusFilter off;
    Channel arc = arc_through_points({0, 0, 0}, {1, 1, 0}, {2, 0, 0}); // radius 1
    Channel line = straight_through_points({0, 0, 0}, {2, 0, 0});
    CHECK(off.accepts(arc));
    CHECK(off.accepts(line));

    RadiusFilter band{10.0, 100.0, true};
    CHECK_FALSE(band.accepts(arc));
    CHECK(band.accepts(line));
    Channel big = arc_through_points({0, 0, 0}, {25, 25, 0}, {50, 0, 0});
    CHECK(band.accepts(big));
    RadiusFilter tight{0.5, 0.9, true};
    CHECK_FALSE(tight.accepts(big));
}
