// Scores a channel against the distance field: the voxel distance value
// array (one field value per sample) and its summary statistics. The scalar
// safety score of a channel is the minimum entry of that array.
#pragma once

#include <cstdint>
#include <vector>

#include "arcplan/arc_geometry.hpp"
#include "arcplan/voxel_field.hpp"

namespace arcplan {

// Sentinel score for channels with a sample outside the occupancy; ordered
// below every valid depth so min-based selection rejects them naturally.
constexpr int kInfeasibleCsv = -1;

struct ChannelScore {
    std::vector<std::int16_t> vdva; // per-sample field values (may be empty in stats-only mode)
    bool feasible = false;
    int csv = kInfeasibleCsv;    // min of vdva when feasible
    std::size_t min_count = 0;   // entries equal to csv
    std::int64_t vdva_sum = 0;
    std::size_t sample_count = 0;

    double mean() const {
        return sample_count ? static_cast<double>(vdva_sum) / static_cast<double>(sample_count)
                            : static_cast<double>(kInfeasibleCsv);
    }
};

// Exact comparison of two score means (a.mean > b.mean) without division.
bool mean_greater(const ChannelScore& a, const ChannelScore& b);

// Full scoring: samples the channel at `step` and records every field value.
// Infeasible channels (any OUTSIDE sample) keep the complete vdva but carry
// sentinel statistics.
ChannelScore score_channel(const Channel& channel, const VoxelDistanceField& field, double step);

// Stats-only scoring for the enumeration hot path: no vdva storage, stops at
// the first OUTSIDE sample. Statistics agree exactly with score_channel for
// feasible channels.
ChannelScore score_channel_stats(const Channel& channel, const VoxelDistanceField& field,
                                 double step);

} // namespace arcplan
