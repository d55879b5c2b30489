#include "arcplan/channel_scoring.hpp"

#include "arcplan/error.hpp"

namespace arcplan {

bool mean_greater(const ChannelScore& a, const ChannelScore& b) {
    // a.sum/a.n > b.sum/b.n with positive counts; cross-multiplied to stay
    // exact in integers.
    return a.vdva_sum * static_cast<std::int64_t>(b.sample_count) >
           b.vdva_sum * static_cast<std::int64_t>(a.sample_count);
}

ChannelScore score_channel(const Channel& channel, const VoxelDistanceField& field, double step) {
    if (step <= 0.0) throw Error("scoring step must be positive");
    ChannelScore score;
    score.vdva.reserve(sample_count(channel, step));
    bool any_outside = false;
    for_each_sample(channel, step, [&](const Vec3& p) {
        const std::int16_t v = query_distance(field, p);
        score.vdva.push_back(v);
        if (v == kOutside) any_outside = true;
    });
    score.sample_count = score.vdva.size();
    if (any_outside) return score; // sentinel statistics, feasible = false

    score.feasible = true;
    int min_v = 0x7fffffff;
    std::size_t min_n = 0;
    std::int64_t sum = 0;
    for (std::int16_t v : score.vdva) {
        sum += v;
        if (v < min_v) {
            min_v = v;
            min_n = 1;
        } else if (v == min_v) {
            ++min_n;
        }
    }
    score.csv = min_v;
    score.min_count = min_n;
    score.vdva_sum = sum;
    return score;
}

ChannelScore score_channel_stats(const Channel& channel, const VoxelDistanceField& field,
                                 double step) {
    ChannelScore score;
    int min_v = 0x7fffffff;
    std::size_t min_n = 0;
    std::int64_t sum = 0;
    std::size_t count = 0;
    bool outside = false;

    // Hand-rolled sampling loop mirroring for_each_sample so the first
    // OUTSIDE sample can abort the walk.
    const Channel& ch = channel;
    const std::size_t k = detail::whole_steps(ch.length, step);
    const bool extra = detail::has_remainder(ch.length, step, k);
    auto visit = [&](const Vec3& p) -> bool {
        const std::int16_t v = query_distance(field, p);
        if (v == kOutside) {
            outside = true;
            return false;
        }
        ++count;
        sum += v;
        if (v < min_v) {
            min_v = v;
            min_n = 1;
        } else if (v == min_v) {
            ++min_n;
        }
        return true;
    };

    if (ch.kind == ChannelKind::straight) {
        const Vec3 dir = (ch.exit - ch.entry) / ch.length;
        for (std::size_t i = 0; i < k || (i == 0 && k == 0); ++i)
            if (!visit(ch.entry + (static_cast<double>(i) * step) * dir)) goto done;
        if (extra && k > 0)
            if (!visit(ch.entry + (static_cast<double>(k) * step) * dir)) goto done;
        visit(ch.exit);
    } else {
        const Vec3 u0 = (ch.entry - ch.center) / ch.radius;
        const Vec3 w = cross(ch.plane_normal, u0);
        const double dphi = (ch.sweep >= 0.0 ? step : -step) / ch.radius;
        const double cd = std::cos(dphi), sd = std::sin(dphi);
        double c = 1.0, s = 0.0;
        for (std::size_t i = 0; i < k || (i == 0 && k == 0); ++i) {
            if (!visit(ch.center + ch.radius * (c * u0 + s * w))) goto done;
            const double cn = c * cd - s * sd;
            s = c * sd + s * cd;
            c = cn;
        }
        if (extra && k > 0)
            if (!visit(ch.center + ch.radius * (c * u0 + s * w))) goto done;
        visit(ch.exit);
    }
done:
    if (outside) return score; // sentinel statistics
    score.feasible = true;
    score.csv = min_v;
    score.min_count = min_n;
    score.vdva_sum = sum;
    score.sample_count = count;
    return score;
}

} // namespace arcplan
