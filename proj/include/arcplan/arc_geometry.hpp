// Constant-curvature channels: the circular arc through three points, the
// zero-curvature straight channel, and equal-interval arc-length sampling of
// either. All lengths in millimeters, curvature in 1/mm.
#pragma once

#include <filesystem>
#include <vector>

#include "arcplan/geom.hpp"
#include "arcplan/mesh_io.hpp"

namespace arcplan {

enum class ChannelKind { arc, straight };

struct Channel {
    ChannelKind kind = ChannelKind::straight;
    Vec3 entry, exit;
    double length = 0.0;    // mm
    double curvature = 0.0; // 1/mm; exactly 0 for straight channels

    // Arc-only fields. The arc from entry to exit is the one containing mid;
    // sweep is signed: positive turns from the entry radius toward
    // cross(plane_normal, entry radius).
    Vec3 mid;
    Vec3 center;
    double radius = 0.0;
    Vec3 plane_normal;
    double sweep = 0.0; // rad, length == radius * |sweep|

    // Point at arc-length parameter s in [0, length].
    Vec3 point_at(double s) const;
};

// The unique circular arc from entry to exit through mid. Collinear triples
// (area / longest-edge^2 below 1e-9) degrade to a straight channel instead of
// an ill-conditioned huge-radius arc. Throws Error when any two points are
// closer than 1e-6 mm.
Channel arc_through_points(const Vec3& entry, const Vec3& mid, const Vec3& exit);

// Straight channel between two distinct points (closer than 1e-6 mm throws).
Channel straight_through_points(const Vec3& entry, const Vec3& exit);

// Calls fn(point) at arc-length parameters 0, step, 2*step, ... and always
// the exact exit point as the final sample. Consecutive samples are exactly
// `step` apart along the curve except the final pair.
template <typename F>
void for_each_sample(const Channel& channel, double step, F&& fn);

// Sample count for the given step: floor(length/step)+1, plus one more when
// the length is not a multiple of step.
std::size_t sample_count(const Channel& channel, double step);

std::vector<Vec3> sample_channel(const Channel& channel, double step);

// Sampled centerline as an ASCII PLY polyline (vertex + edge elements).
void write_polyline_ply(const std::vector<Vec3>& points, const std::filesystem::path& path);

// Closed tube mesh of the given radius swept along the channel, for
// visualization export. `segments` is the cross-section resolution.
TriangleMesh make_tube_mesh(const Channel& channel, double step, double tube_radius,
                            int segments = 16);

// --- implementation ---

namespace detail {

// Whole steps that fit in `length`, tolerant of floating-point shortfall just
// below an exact multiple.
inline std::size_t whole_steps(double length, double step) {
    const double q = length / step;
    double k = std::floor(q);
    if (q - k > 1.0 - 1e-9) k += 1.0;
    return static_cast<std::size_t>(k);
}

inline bool has_remainder(double length, double step, std::size_t k) {
    return length - static_cast<double>(k) * step > 1e-9 * std::max(1.0, length);
}

} // namespace detail

template <typename F>
void for_each_sample(const Channel& channel, double step, F&& fn) {
    const std::size_t k = detail::whole_steps(channel.length, step);
    const bool extra = detail::has_remainder(channel.length, step, k);

    if (channel.kind == ChannelKind::straight) {
        const Vec3 dir = (channel.exit - channel.entry) / channel.length;
        for (std::size_t i = 0; i < k || (i == 0 && k == 0); ++i)
            fn(channel.entry + (static_cast<double>(i) * step) * dir);
        if (extra && k > 0) fn(channel.entry + (static_cast<double>(k) * step) * dir);
        fn(channel.exit);
        return;
    }

    // Arc: rotate the entry radius incrementally about the plane normal.
    const Vec3 u0 = (channel.entry - channel.center) / channel.radius;
    const Vec3 w = cross(channel.plane_normal, u0);
    const double dphi = (channel.sweep >= 0.0 ? step : -step) / channel.radius;
    const double cd = std::cos(dphi), sd = std::sin(dphi);
    double c = 1.0, s = 0.0;
    for (std::size_t i = 0; i < k || (i == 0 && k == 0); ++i) {
        // i == 0 reproduces the entry only to rounding; emit it exactly
        fn(i == 0 ? channel.entry : channel.center + channel.radius * (c * u0 + s * w));
        const double cn = c * cd - s * sd;
        s = c * sd + s * cd;
        c = cn;
    }
    if (extra && k > 0) fn(channel.center + channel.radius * (c * u0 + s * w));
    fn(channel.exit);
}

} // namespace arcplan
