#include "arcplan/seeding.hpp"

#include <cmath>

#include "arcplan/error.hpp"

namespace arcplan {

namespace {
constexpr Vec3 kVerticalAxis{0.0, 0.0, 1.0};
constexpr Vec3 kAnteriorAxis{0.0, 1.0, 0.0};
} // namespace

void lattice_axes(const AnatomicalFrame& frame, Vec3& u, Vec3& v) {
    const Vec3& n = frame.sagittal_normal;
    Vec3 cand = kVerticalAxis - dot(kVerticalAxis, n) * n;
    if (norm(cand) < 1e-6) cand = kAnteriorAxis - dot(kAnteriorAxis, n) * n;
    u = normalized(cand);
    v = cross(n, u);
}

std::vector<SeedPoint> make_lattice(const Vec3& center, const AnatomicalFrame& frame, int rows,
                                    int cols, double spacing) {
    if (rows < 1 || cols < 1) throw Error("lattice rows/cols must be >= 1");
    if (spacing <= 0.0) throw Error("lattice spacing must be positive");
    check_frame(frame);

    Vec3 u, v;
    lattice_axes(frame, u, v);
    std::vector<SeedPoint> points;
    points.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double du = (r - 0.5 * (rows - 1)) * spacing;
            const double dv = (c - 0.5 * (cols - 1)) * spacing;
            points.push_back({center + du * u + dv * v, r, c});
        }
    }
    return points;
}

std::vector<SeedPoint> project_to_surface(const std::vector<SeedPoint>& points,
                                          const AnatomicalFrame& frame, const TriangleMesh& mesh,
                                          int toward_sign) {
    const Vec3 dir = toward_sign >= 0 ? frame.sagittal_normal : -frame.sagittal_normal;
    std::vector<SeedPoint> projected;
    projected.reserve(points.size());
    for (const SeedPoint& p : points) {
        const std::vector<RayHit> hits = ray_mesh_intersections(mesh, p.position, dir);
        if (hits.empty()) continue; // ray misses the bone: drop
        projected.push_back({hits.front().point, p.row, p.col});
    }
    return projected;
}

std::vector<SeedPoint> prune_outside(const std::vector<SeedPoint>& points, const VoxelGrid& grid,
                                     const Vec3& inset_dir, double inset) {
    std::vector<SeedPoint> kept;
    kept.reserve(points.size());
    for (const SeedPoint& p : points) {
        const Vec3 pos = p.position + inset * inset_dir;
        if (grid.occupied(grid.index_of(pos))) kept.push_back({pos, p.row, p.col});
    }
    return kept;
}

SeedLattices generate_seed_lattices(const SeedSpec& spec, const TriangleMesh& mesh,
                                    const VoxelGrid& grid, double inset) {
    check_frame(spec.frame);
    if (inset < 0.0) inset = grid.pitch;

    const double entry_side = spec.frame.signed_distance(spec.entry_seed);
    const double exit_side = spec.frame.signed_distance(spec.exit_seed);
    if (entry_side * exit_side >= 0.0)
        throw Error("entry and exit seeds must lie on opposite sides of the sagittal plane");

    // Projection runs from each seed's side toward the sagittal plane.
    const int entry_toward = entry_side > 0.0 ? -1 : +1;
    const int exit_toward = -entry_toward;

    auto surface_set = [&](const Vec3& seed, const LatticeSpec& lat, int toward,
                           const char* name) {
        auto pts = make_lattice(seed, spec.frame, lat.rows, lat.cols, lat.spacing);
        pts = project_to_surface(pts, spec.frame, mesh, toward);
        const Vec3 dir = toward >= 0 ? spec.frame.sagittal_normal : -spec.frame.sagittal_normal;
        pts = prune_outside(pts, grid, dir, inset);
        if (pts.empty()) throw Error(std::string("no viable seed points on ") + name + " set");
        return pts;
    };

    SeedLattices out;
    out.entry_points = surface_set(spec.entry_seed, spec.entry_lattice, entry_toward, "entry");
    out.exit_points = surface_set(spec.exit_seed, spec.exit_lattice, exit_toward, "exit");

    auto mid = make_lattice(spec.middle_seed, spec.frame, spec.middle_lattice.rows,
                            spec.middle_lattice.cols, spec.middle_lattice.spacing);
    out.middle_points = prune_outside(mid, grid, Vec3(), 0.0);
    if (out.middle_points.empty()) throw Error("no viable seed points on middle set");
    return out;
}

} // namespace arcplan
