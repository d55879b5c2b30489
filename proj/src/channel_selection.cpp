#include "arcplan/channel_selection.hpp"

namespace arcplan {

namespace {

int cmp_csv(const CandidateRef& a, const CandidateRef& b) {
    return a.score.csv == b.score.csv ? 0 : (a.score.csv > b.score.csv ? 1 : -1);
}

int cmp_pair(const CandidateRef& a, const CandidateRef& b) {
    if (int c = cmp_csv(a, b)) return c;
    if (a.score.min_count != b.score.min_count)
        return a.score.min_count < b.score.min_count ? 1 : -1;
    return 0;
}

int cmp_triple(const CandidateRef& a, const CandidateRef& b) {
    if (int c = cmp_pair(a, b)) return c;
    if (mean_greater(a.score, b.score)) return 1;
    if (mean_greater(b.score, a.score)) return -1;
    return 0;
}

} // namespace

bool BestChannelSelector::better(const CandidateRef& a, const CandidateRef& b) {
    if (int c = cmp_triple(a, b)) return c > 0;
    const auto key = [](const CandidateRef& c) {
        return std::tuple(c.entry_index, c.middle_index, c.exit_index);
    };
    return key(a) < key(b);
}

void BestChannelSelector::add(const CandidateRef& cand) {
    if (!cand.score.feasible) {
        ++stats_.infeasible;
        return;
    }
    ++stats_.feasible;
    if (!best_) {
        best_ = cand;
        stats_.stage1 = stats_.stage2 = stats_.stage3 = 1;
        return;
    }
    switch (cmp_csv(cand, *best_)) {
        case 1: stats_.stage1 = 1; break;
        case 0: ++stats_.stage1; break;
        default: break;
    }
    switch (cmp_pair(cand, *best_)) {
        case 1: stats_.stage2 = 1; break;
        case 0: ++stats_.stage2; break;
        default: break;
    }
    switch (cmp_triple(cand, *best_)) {
        case 1: stats_.stage3 = 1; break;
        case 0: ++stats_.stage3; break;
        default: break;
    }
    if (better(cand, *best_)) best_ = cand;
}

void BestChannelSelector::merge(const BestChannelSelector& other) {
    stats_.enumerated += other.stats_.enumerated;
    stats_.skipped_coincident += other.stats_.skipped_coincident;
    stats_.skipped_radius += other.stats_.skipped_radius;
    stats_.infeasible += other.stats_.infeasible;
    stats_.feasible += other.stats_.feasible;

    if (!other.best_) return;
    if (!best_) {
        best_ = other.best_;
        stats_.stage1 = other.stats_.stage1;
        stats_.stage2 = other.stats_.stage2;
        stats_.stage3 = other.stats_.stage3;
        return;
    }
    auto merge_stage = [](std::uint64_t& mine, std::uint64_t theirs, int cmp) {
        if (cmp < 0) mine = theirs;
        else if (cmp == 0) mine += theirs;
    };
    merge_stage(stats_.stage1, other.stats_.stage1, cmp_csv(*best_, *other.best_));
    merge_stage(stats_.stage2, other.stats_.stage2, cmp_pair(*best_, *other.best_));
    merge_stage(stats_.stage3, other.stats_.stage3, cmp_triple(*best_, *other.best_));
    if (better(*other.best_, *best_)) best_ = other.best_;
}

std::optional<CandidateRef> BestChannelSelector::best(int min_csv) const {
    if (best_ && best_->score.csv >= min_csv) return best_;
    return std::nullopt;
}

SelectionResult select_best(const std::vector<CandidateRef>& candidates, int min_csv) {
    BestChannelSelector selector;
    selector.stats().enumerated = candidates.size();
    for (const CandidateRef& c : candidates) selector.add(c);
    return {selector.best(min_csv), selector.stats()};
}

} // namespace arcplan
