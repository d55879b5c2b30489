// Candidate point generation: square lattices parallel to the sagittal
// plane around the three user-supplied seed points. Entry and exit lattices
// are projected perpendicular to the sagittal plane onto the bone surface
// and inset one voxel; the middle lattice is interior and only pruned.
#pragma once

#include <vector>

#include "arcplan/geom.hpp"
#include "arcplan/mesh_io.hpp"
#include "arcplan/voxel_field.hpp"

namespace arcplan {

struct LatticeSpec {
    int rows = 10;
    int cols = 10;
    double spacing = 2.0; // mm
};

struct SeedSpec {
    Vec3 entry_seed, middle_seed, exit_seed;
    AnatomicalFrame frame;
    LatticeSpec entry_lattice{10, 10, 2.0};
    LatticeSpec exit_lattice{10, 10, 2.0};
    LatticeSpec middle_lattice{10, 10, 1.0}; // more compact by default
};

struct SeedPoint {
    Vec3 position;
    int row = 0, col = 0; // lattice provenance
};

struct SeedLattices {
    std::vector<SeedPoint> entry_points, middle_points, exit_points;
};

// In-plane lattice axes for a frame: Gram-Schmidt of the world vertical axis
// (falling back to the world anterior axis when near-parallel) against the
// sagittal normal, and the cross product completing the basis.
void lattice_axes(const AnatomicalFrame& frame, Vec3& u, Vec3& v);

// rows x cols planar grid centered at `center`, lying in the plane through
// `center` with the sagittal normal; row-major order.
std::vector<SeedPoint> make_lattice(const Vec3& center, const AnatomicalFrame& frame, int rows,
                                    int cols, double spacing);

// Replaces each point by its first ray-mesh hit along toward_sign *
// sagittal_normal; points whose ray misses the mesh are dropped.
std::vector<SeedPoint> project_to_surface(const std::vector<SeedPoint>& points,
                                          const AnatomicalFrame& frame, const TriangleMesh& mesh,
                                          int toward_sign);

// Pushes each point `inset` mm along `inset_dir` (pass a zero vector for
// interior points), then keeps those whose containing voxel is occupied.
std::vector<SeedPoint> prune_outside(const std::vector<SeedPoint>& points, const VoxelGrid& grid,
                                     const Vec3& inset_dir, double inset);

// Full seeding pipeline for all three sets. `inset` defaults to the grid
// pitch when negative. Throws Error when a set comes out empty or the entry
// and exit seeds are not on opposite sides of the sagittal plane.
SeedLattices generate_seed_lattices(const SeedSpec& spec, const TriangleMesh& mesh,
                                    const VoxelGrid& grid, double inset = -1.0);

} // namespace arcplan
