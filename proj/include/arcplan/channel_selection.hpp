// Candidate enumeration over the three seed sets and the three-stage
// lexicographic selection of the best channel: highest safety score first,
// then fewest minimum entries, then highest mean, with an index-order
// tie-break that makes the result independent of arrival order.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "arcplan/arc_geometry.hpp"
#include "arcplan/channel_scoring.hpp"
#include "arcplan/error.hpp"
#include "arcplan/seeding.hpp"

namespace arcplan {

struct CandidateRef {
    int entry_index = -1;
    int middle_index = -1; // -1 for straight candidates
    int exit_index = -1;
    Channel channel;
    ChannelScore score;
};

struct SelectionStats {
    std::uint64_t enumerated = 0;         // combinations considered
    std::uint64_t skipped_coincident = 0; // failed the pairwise-distance precondition
    std::uint64_t skipped_radius = 0;     // outside the optional hardware radius band
    std::uint64_t infeasible = 0;
    std::uint64_t feasible = 0;
    std::uint64_t stage1 = 0; // candidates tied at the best csv
    std::uint64_t stage2 = 0; // ... and at the fewest minima
    std::uint64_t stage3 = 0; // ... and at the best mean
};

// Optional hardware constraint on arc radii; disabled by default.
struct RadiusFilter {
    double min_radius = 0.0;
    double max_radius = 0.0;
    bool enabled = false;
    bool accepts(const Channel& ch) const {
        return !enabled || ch.kind == ChannelKind::straight ||
               (ch.radius >= min_radius && ch.radius <= max_radius);
    }
};

// Streaming running-best under the total order (csv desc, min_count asc,
// mean desc, index tuple asc). Per-worker instances merge deterministically,
// so results do not depend on scheduling or arrival order.
class BestChannelSelector {
public:
    void add(const CandidateRef& cand);
    void merge(const BestChannelSelector& other);

    // The winner, or nullopt when no feasible candidate reached min_csv.
    std::optional<CandidateRef> best(int min_csv) const;
    const SelectionStats& stats() const { return stats_; }
    SelectionStats& stats() { return stats_; }

private:
    static bool better(const CandidateRef& a, const CandidateRef& b);
    std::optional<CandidateRef> best_;
    SelectionStats stats_;
};

// Yields every (entry, middle, exit) combination in entry-major index order
// as arc channels; coincident triples are skipped and counted. fn receives a
// CandidateRef with an unscored channel. The _range form restricts the entry
// indices to [entry_begin, entry_end) so workers can split the outer loop.
template <typename F>
void enumerate_arcs(const SeedLattices& lattices, SelectionStats& stats, F&& fn);
template <typename F>
void enumerate_arcs_range(const SeedLattices& lattices, std::size_t entry_begin,
                          std::size_t entry_end, SelectionStats& stats, F&& fn);

// Every (entry, exit) pair as a straight channel; the middle set is unused.
template <typename F>
void enumerate_straights(const SeedLattices& lattices, SelectionStats& stats, F&& fn);
template <typename F>
void enumerate_straights_range(const SeedLattices& lattices, std::size_t entry_begin,
                               std::size_t entry_end, SelectionStats& stats, F&& fn);

struct SelectionResult {
    std::optional<CandidateRef> best;
    SelectionStats stats;
};

// Convenience wrapper over BestChannelSelector for pre-scored candidates.
SelectionResult select_best(const std::vector<CandidateRef>& candidates, int min_csv);

// --- implementation ---

namespace detail {

inline bool triple_distinct(const Vec3& a, const Vec3& b, const Vec3& c) {
    constexpr double kMin = 1e-6;
    return distance(a, b) > kMin && distance(b, c) > kMin && distance(a, c) > kMin;
}

} // namespace detail

template <typename F>
void enumerate_arcs_range(const SeedLattices& lattices, std::size_t entry_begin,
                          std::size_t entry_end, SelectionStats& stats, F&& fn) {
    if (lattices.entry_points.empty() || lattices.middle_points.empty() ||
        lattices.exit_points.empty())
        throw Error("enumerate_arcs: empty seed set");
    for (std::size_t e = entry_begin; e < entry_end; ++e) {
        for (std::size_t m = 0; m < lattices.middle_points.size(); ++m) {
            for (std::size_t x = 0; x < lattices.exit_points.size(); ++x) {
                ++stats.enumerated;
                const Vec3& pe = lattices.entry_points[e].position;
                const Vec3& pm = lattices.middle_points[m].position;
                const Vec3& px = lattices.exit_points[x].position;
                if (!detail::triple_distinct(pe, pm, px)) {
                    ++stats.skipped_coincident;
                    continue;
                }
                CandidateRef cand;
                cand.entry_index = static_cast<int>(e);
                cand.middle_index = static_cast<int>(m);
                cand.exit_index = static_cast<int>(x);
                cand.channel = arc_through_points(pe, pm, px);
                fn(cand);
            }
        }
    }
}

template <typename F>
void enumerate_arcs(const SeedLattices& lattices, SelectionStats& stats, F&& fn) {
    enumerate_arcs_range(lattices, 0, lattices.entry_points.size(), stats,
                         std::forward<F>(fn));
}

template <typename F>
void enumerate_straights_range(const SeedLattices& lattices, std::size_t entry_begin,
                               std::size_t entry_end, SelectionStats& stats, F&& fn) {
    if (lattices.entry_points.empty() || lattices.exit_points.empty())
        throw Error("enumerate_straights: empty seed set");
    for (std::size_t e = entry_begin; e < entry_end; ++e) {
        for (std::size_t x = 0; x < lattices.exit_points.size(); ++x) {
            ++stats.enumerated;
            const Vec3& pe = lattices.entry_points[e].position;
            const Vec3& px = lattices.exit_points[x].position;
            if (distance(pe, px) <= 1e-6) {
                ++stats.skipped_coincident;
                continue;
            }
            CandidateRef cand;
            cand.entry_index = static_cast<int>(e);
            cand.exit_index = static_cast<int>(x);
            cand.channel = straight_through_points(pe, px);
            fn(cand);
        }
    }
}

template <typename F>
void enumerate_straights(const SeedLattices& lattices, SelectionStats& stats, F&& fn) {
    enumerate_straights_range(lattices, 0, lattices.entry_points.size(), stats,
                              std::forward<F>(fn));
}

} // namespace arcplan
