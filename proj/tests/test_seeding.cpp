#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "arcplan/error.hpp"
#include "arcplan/seeding.hpp"
#include "arcplan/voxel_field.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace arcplan;

namespace {

AnatomicalFrame frame_y(const Vec3& origin = {0, 0, 0}) {
    return {origin, Vec3(0, 1, 0)};
}

} // namespace

TEST_CASE("lattice axes are orthonormal and perpendicular to the sagittal normal") {
    Vec3 u, v;
    lattice_axes(frame_y(), u, v);
    CHECK(std::abs(norm(u) - 1.0) < 1e-12);
    CHECK(std::abs(norm(v) - 1.0) < 1e-12);
    CHECK(std::abs(dot(u, v)) < 1e-12);
    CHECK(std::abs(dot(u, Vec3(0, 1, 0))) < 1e-12);
    CHECK(std::abs(dot(v, Vec3(0, 1, 0))) < 1e-12);
    CHECK(u == Vec3(0, 0, 1)); // world vertical survives Gram-Schmidt untouched

    // normal parallel to the vertical axis: falls back to the anterior axis
    AnatomicalFrame up{{0, 0, 0}, Vec3(0, 0, 1)};
    lattice_axes(up, u, v);
    CHECK(std::abs(dot(u, Vec3(0, 0, 1))) < 1e-12);
    CHECK(std::abs(dot(v, Vec3(0, 0, 1))) < 1e-12);
    CHECK(std::abs(dot(u, v)) < 1e-12);
}

TEST_CASE("1x1 lattice is the center point itself") {
    auto pts = make_lattice({3, 4, 5}, frame_y(), 1, 1, 2.0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].position == Vec3(3, 4, 5));
    CHECK(pts[0].row == 0);
    CHECK(pts[0].col == 0);
}

TEST_CASE("10x10 lattice spans an 18x18 mm square in the sagittal-parallel plane") {
    const Vec3 center(1, 2, 3);
    auto pts = make_lattice(center, frame_y(), 10, 10, 2.0);
    REQUIRE(pts.size() == 100);

    Vec3 u, v;
    lattice_axes(frame_y(), u, v);
    double ulo = 1e30, uhi = -1e30, vlo = 1e30, vhi = -1e30;
    Vec3 sum;
    for (const auto& p : pts) {
        const Vec3 d = p.position - center;
        CHECK(std::abs(dot(d, Vec3(0, 1, 0))) < 1e-12); // in-plane
        ulo = std::min(ulo, dot(d, u));
        uhi = std::max(uhi, dot(d, u));
        vlo = std::min(vlo, dot(d, v));
        vhi = std::max(vhi, dot(d, v));
        sum += p.position;
    }
    CHECK(uhi - ulo == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(vhi - vlo == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(distance(sum / 100.0, center) < 1e-9); // centered on the seed

    // row-major provenance
    CHECK(pts[0].row == 0);
    CHECK(pts[0].col == 0);
    CHECK(pts[1].col == 1);
    CHECK(pts[10].row == 1);
}

TEST_CASE("3x1 lattice is three collinear points 5 mm apart") {
    auto pts = make_lattice({0, 0, 0}, frame_y(), 3, 1, 5.0);
    REQUIRE(pts.size() == 3);
    CHECK(distance(pts[0].position, pts[1].position) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(distance(pts[1].position, pts[2].position) == doctest::Approx(5.0).epsilon(1e-12));
    const Vec3 d1 = normalized(pts[1].position - pts[0].position);
    const Vec3 d2 = normalized(pts[2].position - pts[1].position);
    CHECK(distance(d1, d2) < 1e-12);
}

TEST_CASE("lattice parameter validation") {
    CHECK_THROWS_WITH_AS(make_lattice({0, 0, 0}, frame_y(), 0, 5, 1.0),
                         doctest::Contains("rows/cols"), Error);
    CHECK_THROWS_WITH_AS(make_lattice({0, 0, 0}, frame_y(), 5, 5, 0.0),
                         doctest::Contains("spacing"), Error);
    AnatomicalFrame bad{{0, 0, 0}, Vec3(0, 2, 0)};
    CHECK_THROWS_WITH_AS(make_lattice({0, 0, 0}, bad, 5, 5, 1.0),
                         doctest::Contains("unit length"), Error);
}

TEST_CASE("projection onto a planar face lands on the face") {
    TriangleMesh cube = testutil::box_mesh({0, 0, 0}, {10, 10, 10});
    AnatomicalFrame frame{{5, 5, 5}, Vec3(1, 0, 0)};
    auto pts = make_lattice({-5, 5, 5}, frame, 10, 10, 1.0); // 9x9 span, inside the face
    auto hit = project_to_surface(pts, frame, cube, +1);
    REQUIRE(hit.size() == 100);
    for (std::size_t i = 0; i < hit.size(); ++i) {
        // rays grazing the face's triangulation diagonal resolve by a
        // sub-micron origin nudge, so positions are exact only to 1e-5
        CHECK(std::abs(hit[i].position.x) < 1e-5);
        CHECK(std::abs(hit[i].position.y - pts[i].position.y) < 1e-5);
        CHECK(std::abs(hit[i].position.z - pts[i].position.z) < 1e-5);
        CHECK(hit[i].row == pts[i].row); // provenance preserved
        CHECK(hit[i].col == pts[i].col);
    }
}

TEST_CASE("rays that miss the mesh drop their points") {
    TriangleMesh cube = testutil::box_mesh({0, 0, 0}, {10, 10, 10});
    AnatomicalFrame frame{{5, 5, 5}, Vec3(1, 0, 0)};
    // 30 mm spacing: only the central point's ray meets the 10 mm face
    auto pts = make_lattice({-5, 5, 5}, frame, 3, 3, 30.0);
    auto hit = project_to_surface(pts, frame, cube, +1);
    REQUIRE(hit.size() == 1);
    CHECK(hit[0].row == 1);
    CHECK(hit[0].col == 1);

    // pointing away from the cube everything misses
    CHECK(project_to_surface(pts, frame, cube, -1).empty());
}

TEST_CASE("projection onto a sphere lands on the sphere") {
    const double r = 20.0;
    TriangleMesh sphere = testutil::uv_sphere({0, 0, 0}, r, 96, 48);
    AnatomicalFrame frame{{0, 0, 0}, Vec3(1, 0, 0)};
    auto pts = make_lattice({-40, 0, 0}, frame, 10, 10, 2.0);
    auto hit = project_to_surface(pts, frame, sphere, +1);
    REQUIRE(hit.size() == 100);
    for (const auto& p : hit) {
        // within the chordal sag of the 96x48 faceting
        CHECK(std::abs(norm(p.position) - r) < 0.05);
        CHECK(p.position.x < -15.0); // first hit: the near hemisphere
    }
}

TEST_CASE("pruning keeps interior points and drops exterior ones") {
    TriangleMesh cube = testutil::box_mesh({0, 0, 0}, {10, 10, 10});
    VoxelGrid grid = voxelize(cube, 1.0);

    std::vector<SeedPoint> pts = {{{5, 5, 5}, 0, 0}, {{15, 5, 5}, 0, 1}, {{-0.4, 5, 5}, 1, 0}};
    auto kept = prune_outside(pts, grid, Vec3(), 0.0);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].position == Vec3(5, 5, 5));

    // the surface point in the margin voxel survives once inset inward
    auto inset = prune_outside({{{-0.4, 5, 5}, 1, 0}}, grid, Vec3(1, 0, 0), 1.0);
    REQUIRE(inset.size() == 1);
    CHECK(inset[0].position == Vec3(0.6, 5, 5));
    CHECK(inset[0].row == 1);
}

TEST_CASE("full pipeline on a cuboid: projected, inset, and on opposite sides") {
    TriangleMesh cube = testutil::box_mesh({0, 0, 0}, {20, 20, 20});
    VoxelGrid grid = voxelize(cube, 1.0);

    SeedSpec spec;
    spec.frame = {{10, 10, 10}, Vec3(0, 1, 0)};
    spec.entry_seed = {10, -5, 10};
    spec.exit_seed = {10, 25, 10};
    spec.middle_seed = {10, 10, 10};
    spec.entry_lattice = {3, 3, 2.0};
    spec.exit_lattice = {3, 3, 2.0};
    spec.middle_lattice = {3, 3, 2.0};

    SeedLattices lat = generate_seed_lattices(spec, cube, grid);
    REQUIRE(lat.entry_points.size() == 9);
    REQUIRE(lat.exit_points.size() == 9);
    REQUIRE(lat.middle_points.size() == 9);

    for (const auto& p : lat.entry_points) {
        CHECK(p.position.y == doctest::Approx(1.0).epsilon(1e-9)); // face + 1 mm inset
        CHECK(grid.occupied(grid.index_of(p.position)));
        CHECK(spec.frame.signed_distance(p.position) < 0.0);
    }
    for (const auto& p : lat.exit_points) {
        CHECK(p.position.y == doctest::Approx(19.0).epsilon(1e-9));
        CHECK(grid.occupied(grid.index_of(p.position)));
        CHECK(spec.frame.signed_distance(p.position) > 0.0);
    }
    for (const auto& p : lat.middle_points) CHECK(grid.occupied(grid.index_of(p.position)));

    // identical inputs give identical outputs, in order
    SeedLattices again = generate_seed_lattices(spec, cube, grid);
    REQUIRE(again.entry_points.size() == lat.entry_points.size());
    for (std::size_t i = 0; i < lat.entry_points.size(); ++i) {
        CHECK(again.entry_points[i].position == lat.entry_points[i].position);
        CHECK(again.entry_points[i].row == lat.entry_points[i].row);
        CHECK(again.entry_points[i].col == lat.entry_points[i].col);
    }

    // a custom inset lands the entry points deeper inside
    SeedLattices deep = generate_seed_lattices(spec, cube, grid, 2.5);
    for (const auto& p : deep.entry_points) CHECK(p.position.y == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("seeds on the same side of the sagittal plane are rejected") {
    TriangleMesh cube = testutil::box_mesh({0, 0, 0}, {20, 20, 20});
    VoxelGrid grid = voxelize(cube, 1.0);
    SeedSpec spec;
    spec.frame = {{10, 10, 10}, Vec3(0, 1, 0)};
    spec.entry_seed = {10, -5, 10};
    spec.exit_seed = {10, -8, 10}; // same side as entry
    spec.middle_seed = {10, 10, 10};
    CHECK_THROWS_WITH_AS(generate_seed_lattices(spec, cube, grid),
                         doctest::Contains("opposite sides"), Error);
}

TEST_CASE("an empty survivor set names the failing lattice") {
    TriangleMesh cube = testutil::box_mesh({0, 0, 0}, {20, 20, 20});
    VoxelGrid grid = voxelize(cube, 1.0);
    SeedSpec spec;
    spec.frame = {{10, 10, 10}, Vec3(0, 1, 0)};
    spec.entry_seed = {10, -5, 10};
    spec.exit_seed = {10, 25, 10};
    spec.middle_seed = {10, 10, 80}; // far above the solid; pruning empties it
    spec.middle_lattice = {3, 3, 1.0};
    CHECK_THROWS_WITH_AS(generate_seed_lattices(spec, cube, grid),
                         doctest::Contains("middle"), Error);

    SeedSpec miss = spec;
    miss.middle_seed = {10, 10, 10};
    miss.entry_seed = {10, -5, 80}; // rays pass over the cuboid
    CHECK_THROWS_WITH_AS(generate_seed_lattices(miss, cube, grid),
                         doctest::Contains("entry"), Error);
}
