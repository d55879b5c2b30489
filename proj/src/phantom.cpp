#include "arcplan/phantom.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "arcplan/error.hpp"

namespace arcplan {

namespace {

// Shared-vertex builder; exact-coordinate dedup keeps the output watertight
// as long as adjacent faces evaluate corners identically.
class SolidBuilder {
public:
    std::uint32_t vertex(const Vec3& v) {
        const Key key{v.x, v.y, v.z};
        auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(mesh_.vertices.size()));
        if (inserted) mesh_.vertices.push_back(v);
        return it->second;
    }
    void tri(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        mesh_.triangles.push_back({a, b, c});
    }
    void quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
        const std::uint32_t ia = vertex(a), ib = vertex(b), ic = vertex(c), id = vertex(d);
        tri(ia, ib, ic);
        tri(ia, ic, id);
    }
    TriangleMesh take() {
        mesh_.compute_normals();
        return std::move(mesh_);
    }

private:
    struct Key {
        double x, y, z;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::hash<double> h;
            return (h(k.x) * 31 + h(k.y)) * 31 + h(k.z);
        }
    };
    TriangleMesh mesh_;
    std::unordered_map<Key, std::uint32_t, KeyHash> index_;
};

} // namespace

TriangleMesh make_cuboid(double sx, double sy, double sz) {
    if (sx <= 0.0 || sy <= 0.0 || sz <= 0.0) throw Error("cuboid: sides must be positive");
    SolidBuilder b;
    const Vec3 p000(0, 0, 0), p100(sx, 0, 0), p010(0, sy, 0), p110(sx, sy, 0);
    const Vec3 p001(0, 0, sz), p101(sx, 0, sz), p011(0, sy, sz), p111(sx, sy, sz);
    b.quad(p000, p010, p110, p100); // z = 0, normal -z
    b.quad(p001, p101, p111, p011); // z = sz, normal +z
    b.quad(p000, p100, p101, p001); // y = 0, normal -y
    b.quad(p010, p011, p111, p110); // y = sy, normal +y
    b.quad(p000, p001, p011, p010); // x = 0, normal -x
    b.quad(p100, p110, p111, p101); // x = sx, normal +x
    return b.take();
}

TriangleMesh make_c_plate(const CPlateParams& p) {
    if (p.sweep_deg <= 0.0 || p.sweep_deg >= 360.0)
        throw Error("c_plate: sweep must be in (0, 360) degrees");
    if (p.thickness <= 0.0 || p.thickness >= 2.0 * p.mid_radius)
        throw Error("c_plate: thickness must be in (0, 2*mid_radius)");
    if (p.width <= 0.0) throw Error("c_plate: width must be positive");
    if (p.segments < 2) throw Error("c_plate: needs at least 2 segments");

    const double r0 = p.mid_radius - 0.5 * p.thickness;
    const double r1 = p.mid_radius + 0.5 * p.thickness;
    const double z0 = -0.5 * p.width, z1 = 0.5 * p.width;
    const double half = 0.5 * p.sweep_deg * std::numbers::pi / 180.0;

    auto at = [&](double r, double theta, double z) {
        return Vec3(r * std::cos(theta), r * std::sin(theta), z);
    };

    SolidBuilder b;
    for (int j = 0; j < p.segments; ++j) {
        const double ta = -half + 2.0 * half * j / p.segments;
        const double tb = -half + 2.0 * half * (j + 1) / p.segments;
        // outer wall, outward radial normal
        b.quad(at(r1, ta, z0), at(r1, tb, z0), at(r1, tb, z1), at(r1, ta, z1));
        // inner wall, inward radial normal
        b.quad(at(r0, ta, z0), at(r0, ta, z1), at(r0, tb, z1), at(r0, tb, z0));
        // top and bottom annular faces
        b.quad(at(r0, ta, z1), at(r1, ta, z1), at(r1, tb, z1), at(r0, tb, z1));
        b.quad(at(r0, ta, z0), at(r0, tb, z0), at(r1, tb, z0), at(r1, ta, z0));
    }
    // end caps
    b.quad(at(r0, -half, z0), at(r1, -half, z0), at(r1, -half, z1), at(r0, -half, z1));
    b.quad(at(r0, half, z0), at(r0, half, z1), at(r1, half, z1), at(r1, half, z0));
    return b.take();
}

TriangleMesh make_torus_segment(const TorusSegmentParams& p) {
    if (p.sweep_deg <= 0.0 || p.sweep_deg >= 360.0)
        throw Error("torus_segment: sweep must be in (0, 360) degrees");
    if (p.tube_radius <= 0.0 || p.tube_radius >= p.ring_radius)
        throw Error("torus_segment: tube radius must be in (0, ring_radius)");
    if (p.ring_segments < 2 || p.tube_segments < 3)
        throw Error("torus_segment: too few segments");

    const double half = 0.5 * p.sweep_deg * std::numbers::pi / 180.0;
    const int n = p.ring_segments, m = p.tube_segments;

    auto ring_point = [&](int j, int i) {
        const double theta = -half + 2.0 * half * j / n;
        const double alpha = 2.0 * std::numbers::pi * i / m;
        const Vec3 c(p.ring_radius * std::cos(theta), p.ring_radius * std::sin(theta), 0.0);
        const Vec3 radial(std::cos(theta), std::sin(theta), 0.0);
        return c + p.tube_radius * (std::cos(alpha) * radial + std::sin(alpha) * Vec3(0, 0, 1));
    };

    SolidBuilder b;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            b.quad(ring_point(j, i), ring_point(j + 1, i),
                   ring_point(j + 1, i + 1 == m ? 0 : i + 1), ring_point(j, i + 1 == m ? 0 : i + 1));
    // cap fans at both ends
    const Vec3 c_start(p.ring_radius * std::cos(-half), p.ring_radius * std::sin(-half), 0.0);
    const Vec3 c_end(p.ring_radius * std::cos(half), p.ring_radius * std::sin(half), 0.0);
    const std::uint32_t s = b.vertex(c_start), e = b.vertex(c_end);
    for (int i = 0; i < m; ++i) {
        const int i1 = i + 1 == m ? 0 : i + 1;
        b.tri(s, b.vertex(ring_point(0, i)), b.vertex(ring_point(0, i1)));
        b.tri(e, b.vertex(ring_point(n, i1)), b.vertex(ring_point(n, i)));
    }
    return b.take();
}

} // namespace arcplan
