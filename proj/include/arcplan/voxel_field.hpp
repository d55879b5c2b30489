// Voxel occupancy grid and the erosion-based distance field. The grid is a
// regular lattice (default 1 mm pitch) covering the mesh bounding box plus a
// one-voxel empty margin; the field stores, per occupied voxel, the erosion
// iteration at which that voxel is peeled (outermost layer = 0).
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "arcplan/geom.hpp"
#include "arcplan/mesh_io.hpp"

namespace arcplan {

// Field value for voxels outside the occupancy, ordered below every depth.
constexpr std::int16_t kOutside = -1;

struct VoxelIndex {
    int x = 0, y = 0, z = 0;
    bool operator==(const VoxelIndex&) const = default;
};

struct VoxelGrid {
    Vec3 origin;           // center of voxel (0,0,0), mm
    double pitch = 1.0;    // mm
    int nx = 0, ny = 0, nz = 0;
    std::vector<std::uint8_t> occupancy; // x-fastest, 1 = inside the mesh

    std::size_t voxel_count() const { return occupancy.size(); }
    std::size_t flat(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) * (static_cast<std::size_t>(y) +
                                               static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
    }
    bool in_bounds(const VoxelIndex& v) const {
        return v.x >= 0 && v.x < nx && v.y >= 0 && v.y < ny && v.z >= 0 && v.z < nz;
    }
    bool occupied(const VoxelIndex& v) const {
        return in_bounds(v) && occupancy[flat(v.x, v.y, v.z)] != 0;
    }

    // Voxel containing a point: floor((p - corner)/pitch) per axis, where the
    // corner is origin - pitch/2. Points exactly on a boundary plane go to the
    // higher-index voxel. May return an out-of-bounds index.
    VoxelIndex index_of(const Vec3& p) const {
        return {static_cast<int>(std::floor((p.x - (origin.x - 0.5 * pitch)) / pitch)),
                static_cast<int>(std::floor((p.y - (origin.y - 0.5 * pitch)) / pitch)),
                static_cast<int>(std::floor((p.z - (origin.z - 0.5 * pitch)) / pitch))};
    }
    Vec3 center_of(const VoxelIndex& v) const {
        return origin + Vec3(v.x * pitch, v.y * pitch, v.z * pitch);
    }
    std::size_t occupied_count() const;
};

struct VoxelDistanceField {
    VoxelGrid grid;
    std::vector<std::int16_t> value; // erosion depth, kOutside for empty voxels

    std::int16_t at(const VoxelIndex& v) const {
        return grid.in_bounds(v) ? value[grid.flat(v.x, v.y, v.z)] : kOutside;
    }
};

// Rasterizes the mesh into an occupancy grid: a voxel is occupied iff its
// center lies inside the mesh by ray-parity test. The grid gets a one-voxel
// empty margin on all sides. Throws Error for pitch <= 0 or a degenerate
// bounding box.
VoxelGrid voxelize(const TriangleMesh& mesh, double pitch);

// One morphological erosion pass: peels every occupied voxel that has at
// least one unoccupied neighbor under the given connectivity (6 = faces,
// 26 = faces+edges+corners). Voxels beyond the grid count as unoccupied.
// Returns the peeled voxel indices and the remaining occupancy.
struct ErosionPass {
    std::vector<VoxelIndex> peeled;
    std::vector<std::uint8_t> remaining;
};
ErosionPass erode_once(const VoxelGrid& grid, const std::vector<std::uint8_t>& occupancy,
                       int connectivity = 6);

// Repeats erosion until the occupancy empties; a voxel peeled at iteration k
// gets value k. Empty voxels get kOutside.
VoxelDistanceField build_distance_field(const VoxelGrid& grid, int connectivity = 6);

// Value of the voxel containing `point`; kOutside when the point is outside
// the grid extent or in an empty voxel.
std::int16_t query_distance(const VoxelDistanceField& field, const Vec3& point);

// Debug dump: a text header line "nx ny nz ox oy oz pitch" followed by one
// signed 16-bit little-endian value per voxel, x-fastest; -1 marks OUTSIDE.
void dump_field(const VoxelDistanceField& field, const std::filesystem::path& path);
VoxelDistanceField load_field_dump(const std::filesystem::path& path);

} // namespace arcplan
