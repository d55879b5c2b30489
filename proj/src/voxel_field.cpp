#include "arcplan/voxel_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "arcplan/error.hpp"

namespace arcplan {

std::size_t VoxelGrid::occupied_count() const {
    return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), std::uint8_t(1)));
}

VoxelGrid voxelize(const TriangleMesh& mesh, double pitch) {
    if (pitch <= 0.0) throw Error("voxelize: pitch must be positive");
    if (mesh.vertices.empty() || mesh.triangles.empty())
        throw Error("voxelize: empty mesh");
    const Vec3 lo = mesh.bbox_min();
    const Vec3 hi = mesh.bbox_max();
    if (!(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z))
        throw Error("voxelize: mesh bounding box degenerate");

    VoxelGrid grid;
    grid.pitch = pitch;
    grid.origin = lo - Vec3(0.5 * pitch, 0.5 * pitch, 0.5 * pitch);
    grid.nx = static_cast<int>(std::ceil((hi.x - lo.x) / pitch)) + 2;
    grid.ny = static_cast<int>(std::ceil((hi.y - lo.y) / pitch)) + 2;
    grid.nz = static_cast<int>(std::ceil((hi.z - lo.z) / pitch)) + 2;
    grid.occupancy.assign(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, 0);

    // Parity test per (y,z) row of voxel centers: the ray enters the mesh an
    // odd number of times before reaching a center iff that center is inside.
    const double x_start = grid.origin.x - pitch;
    const Vec3 dir(1.0, 0.0, 0.0);
    std::vector<double> crossings;
    for (int iz = 0; iz < grid.nz; ++iz) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            const Vec3 row_origin(x_start, grid.origin.y + iy * pitch, grid.origin.z + iz * pitch);
            const std::vector<RayHit> hits = ray_mesh_intersections(mesh, row_origin, dir);
            if (hits.empty()) continue;
            crossings.clear();
            for (const RayHit& h : hits) crossings.push_back(x_start + h.t);
            std::size_t next = 0;
            bool inside = false;
            for (int ix = 0; ix < grid.nx; ++ix) {
                const double cx = grid.origin.x + ix * pitch;
                while (next < crossings.size() && crossings[next] < cx) {
                    inside = !inside;
                    ++next;
                }
                if (inside) grid.occupancy[grid.flat(ix, iy, iz)] = 1;
            }
        }
    }
    return grid;
}

namespace {

void neighbor_offsets(int connectivity, std::vector<VoxelIndex>& out) {
    out.clear();
    if (connectivity == 6) {
        out = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    } else if (connectivity == 26) {
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (dx || dy || dz) out.push_back({dx, dy, dz});
    } else {
        throw Error("erosion connectivity must be 6 or 26");
    }
}

} // namespace

ErosionPass erode_once(const VoxelGrid& grid, const std::vector<std::uint8_t>& occupancy,
                       int connectivity) {
    std::vector<VoxelIndex> offsets;
    neighbor_offsets(connectivity, offsets);

    auto occupied = [&](int x, int y, int z) -> bool {
        if (x < 0 || x >= grid.nx || y < 0 || y >= grid.ny || z < 0 || z >= grid.nz) return false;
        return occupancy[grid.flat(x, y, z)] != 0;
    };

    ErosionPass pass;
    pass.remaining = occupancy;
    for (int z = 0; z < grid.nz; ++z) {
        for (int y = 0; y < grid.ny; ++y) {
            for (int x = 0; x < grid.nx; ++x) {
                if (!occupancy[grid.flat(x, y, z)]) continue;
                for (const VoxelIndex& d : offsets) {
                    if (!occupied(x + d.x, y + d.y, z + d.z)) {
                        pass.peeled.push_back({x, y, z});
                        pass.remaining[grid.flat(x, y, z)] = 0;
                        break;
                    }
                }
            }
        }
    }
    return pass;
}

VoxelDistanceField build_distance_field(const VoxelGrid& grid, int connectivity) {
    VoxelDistanceField field;
    field.grid = grid;
    field.value.assign(grid.voxel_count(), kOutside);

    std::vector<std::uint8_t> occ = grid.occupancy;
    std::size_t remaining = grid.occupied_count();
    const int max_iters = grid.nx + grid.ny + grid.nz;
    int depth = 0;
    while (remaining > 0) {
        if (depth > max_iters)
            throw Error("erosion failed to terminate (internal error)");
        ErosionPass pass = erode_once(grid, occ, connectivity);
        for (const VoxelIndex& v : pass.peeled)
            field.value[grid.flat(v.x, v.y, v.z)] = static_cast<std::int16_t>(depth);
        remaining -= pass.peeled.size();
        occ = std::move(pass.remaining);
        ++depth;
    }
    return field;
}

std::int16_t query_distance(const VoxelDistanceField& field, const Vec3& point) {
    return field.at(field.grid.index_of(point));
}

void dump_field(const VoxelDistanceField& field, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write field dump: " + path.string());
    std::ostringstream header;
    header.precision(17);
    header << field.grid.nx << " " << field.grid.ny << " " << field.grid.nz << " "
           << field.grid.origin.x << " " << field.grid.origin.y << " " << field.grid.origin.z
           << " " << field.grid.pitch << "\n";
    os << header.str();
    os.write(reinterpret_cast<const char*>(field.value.data()),
             static_cast<std::streamsize>(field.value.size() * sizeof(std::int16_t)));
    if (!os) throw Error("write failed: " + path.string());
}

VoxelDistanceField load_field_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open field dump: " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw Error("field dump: missing header line");
    std::istringstream hs(header);
    VoxelDistanceField field;
    if (!(hs >> field.grid.nx >> field.grid.ny >> field.grid.nz >> field.grid.origin.x >>
          field.grid.origin.y >> field.grid.origin.z >> field.grid.pitch))
        throw Error("field dump: malformed header");
    if (field.grid.nx < 1 || field.grid.ny < 1 || field.grid.nz < 1 || field.grid.pitch <= 0.0)
        throw Error("field dump: invalid dimensions");
    const std::size_t n = static_cast<std::size_t>(field.grid.nx) * field.grid.ny * field.grid.nz;
    field.value.resize(n);
    in.read(reinterpret_cast<char*>(field.value.data()),
            static_cast<std::streamsize>(n * sizeof(std::int16_t)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(std::int16_t))
        throw Error("field dump: truncated body");
    field.grid.occupancy.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        field.grid.occupancy[i] = field.value[i] == kOutside ? 0 : 1;
    return field;
}

} // namespace arcplan
