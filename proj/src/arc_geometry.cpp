#include "arcplan/arc_geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "arcplan/error.hpp"

namespace arcplan {

Vec3 Channel::point_at(double s) const {
    if (kind == ChannelKind::straight)
        return entry + (s / length) * (exit - entry);
    const Vec3 u0 = (entry - center) / radius;
    const Vec3 w = cross(plane_normal, u0);
    const double phi = (sweep >= 0.0 ? s : -s) / radius;
    return center + radius * (std::cos(phi) * u0 + std::sin(phi) * w);
}

Channel straight_through_points(const Vec3& entry, const Vec3& exit) {
    const double len = distance(entry, exit);
    if (len <= 1e-6) throw Error("straight channel: coincident endpoints");
    Channel ch;
    ch.kind = ChannelKind::straight;
    ch.entry = entry;
    ch.exit = exit;
    ch.length = len;
    ch.curvature = 0.0;
    return ch;
}

Channel arc_through_points(const Vec3& entry, const Vec3& mid, const Vec3& exit) {
    const Vec3 ab = mid - entry;
    const Vec3 ac = exit - entry;
    const Vec3 bc = exit - mid;
    const double lab = norm(ab), lac = norm(ac), lbc = norm(bc);
    if (lab <= 1e-6 || lac <= 1e-6 || lbc <= 1e-6)
        throw Error("arc channel: coincident points");

    const Vec3 n = cross(ab, ac); // 2*area * unit normal
    const double area = 0.5 * norm(n);
    const double longest = std::max({lab, lac, lbc});
    if (area / (longest * longest) < 1e-9)
        return straight_through_points(entry, exit);

    const double n2 = norm_sq(n);
    const Vec3 center =
        entry + (norm_sq(ac) * cross(n, ab) + norm_sq(ab) * cross(ac, n)) / (2.0 * n2);

    Channel ch;
    ch.kind = ChannelKind::arc;
    ch.entry = entry;
    ch.mid = mid;
    ch.exit = exit;
    ch.center = center;
    ch.radius = distance(entry, center);
    ch.plane_normal = n / std::sqrt(n2);
    ch.curvature = 1.0 / ch.radius;

    // Angles about the center, measured from the entry radius; normalized to
    // [0, 2pi). The arc runs from angle 0 to the exit angle on whichever side
    // contains the mid witness.
    const Vec3 u0 = (entry - center) / ch.radius;
    const Vec3 w = cross(ch.plane_normal, u0);
    auto angle_of = [&](const Vec3& p) {
        const Vec3 r = p - center;
        double a = std::atan2(dot(r, w), dot(r, u0));
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        return a;
    };
    const double theta_exit = angle_of(exit);
    const double theta_mid = angle_of(mid);
    ch.sweep = theta_mid <= theta_exit ? theta_exit : theta_exit - 2.0 * std::numbers::pi;
    ch.length = ch.radius * std::abs(ch.sweep);
    return ch;
}

std::size_t sample_count(const Channel& channel, double step) {
    const std::size_t k = detail::whole_steps(channel.length, step);
    return std::max<std::size_t>(k, 1) + 1 +
           (detail::has_remainder(channel.length, step, k) && k > 0 ? 1 : 0);
}

std::vector<Vec3> sample_channel(const Channel& channel, double step) {
    if (step <= 0.0) throw Error("sample step must be positive");
    std::vector<Vec3> points;
    points.reserve(sample_count(channel, step));
    for_each_sample(channel, step, [&](const Vec3& p) { points.push_back(p); });
    return points;
}

void write_polyline_ply(const std::vector<Vec3>& points, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write PLY file: " + path.string());
    os.precision(17);
    os << "ply\nformat ascii 1.0\n";
    os << "element vertex " << points.size() << "\n";
    os << "property double x\nproperty double y\nproperty double z\n";
    os << "element edge " << (points.empty() ? 0 : points.size() - 1) << "\n";
    os << "property int vertex1\nproperty int vertex2\n";
    os << "end_header\n";
    for (const Vec3& p : points) os << p.x << " " << p.y << " " << p.z << "\n";
    for (std::size_t i = 0; i + 1 < points.size(); ++i) os << i << " " << i + 1 << "\n";
    if (!os) throw Error("write failed: " + path.string());
}

TriangleMesh make_tube_mesh(const Channel& channel, double step, double tube_radius,
                            int segments) {
    if (tube_radius <= 0.0) throw Error("tube radius must be positive");
    if (segments < 3) throw Error("tube cross-section needs at least 3 segments");

    const std::vector<Vec3> spine = sample_channel(channel, step);

    // Twist-free frames: arcs use (radial direction, plane normal); straight
    // channels use any fixed perpendicular pair.
    std::vector<Vec3> e1(spine.size()), e2(spine.size());
    if (channel.kind == ChannelKind::arc) {
        for (std::size_t i = 0; i < spine.size(); ++i) {
            e1[i] = normalized(spine[i] - channel.center);
            e2[i] = channel.plane_normal;
        }
    } else {
        const Vec3 dir = normalized(channel.exit - channel.entry);
        const Vec3 pick = std::abs(dir.x) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
        const Vec3 a = normalized(cross(dir, pick));
        const Vec3 b = cross(dir, a);
        for (std::size_t i = 0; i < spine.size(); ++i) {
            e1[i] = a;
            e2[i] = b;
        }
    }

    TriangleMesh mesh;
    const int n = segments;
    for (std::size_t i = 0; i < spine.size(); ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = 2.0 * std::numbers::pi * j / n;
            mesh.vertices.push_back(spine[i] + tube_radius * (std::cos(a) * e1[i] +
                                                              std::sin(a) * e2[i]));
        }
    }
    auto ring = [n](std::size_t i, int j) {
        return static_cast<std::uint32_t>(i * n + (j % n));
    };
    for (std::size_t i = 0; i + 1 < spine.size(); ++i) {
        for (int j = 0; j < n; ++j) {
            mesh.triangles.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            mesh.triangles.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    // End caps: fans around the spine endpoints.
    const std::uint32_t c0 = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(spine.front());
    const std::uint32_t c1 = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(spine.back());
    for (int j = 0; j < n; ++j) {
        mesh.triangles.push_back({c0, ring(0, j), ring(0, j + 1)});
        mesh.triangles.push_back({c1, ring(spine.size() - 1, j + 1), ring(spine.size() - 1, j)});
    }
    mesh.compute_normals();
    return mesh;
}

} // namespace arcplan
