// Triangle mesh container, STL file I/O, and ray queries against the mesh.
// Coordinates are millimeters; STL carries no unit metadata, so that
// convention is asserted here and in the docs.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "arcplan/geom.hpp"

namespace arcplan {

struct Triangle {
    std::uint32_t a = 0, b = 0, c = 0;
};

// Indexed triangle surface. Immutable after load; safe for concurrent reads.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<Vec3> normals; // per-triangle unit normals, derived from geometry

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    Vec3 bbox_min() const;
    Vec3 bbox_max() const;

    // Recomputes per-triangle normals from vertex positions. Degenerate
    // triangles get a zero normal.
    void compute_normals();

    // Checks index bounds and drops triangles with area <= 1e-9 mm^2,
    // then verifies the bounding box has positive extent on all axes.
    // Returns the number of dropped triangles. Throws Error on bad indices
    // or a degenerate bounding box.
    std::size_t validate();
};

// The sagittal frame used by seeding: a point on the sagittal plane and the
// unit left-right axis perpendicular to it.
struct AnatomicalFrame {
    Vec3 sagittal_origin;
    Vec3 sagittal_normal; // unit length within 1e-9

    // Signed distance of a point to the sagittal plane.
    double signed_distance(const Vec3& p) const {
        return dot(p - sagittal_origin, sagittal_normal);
    }
};

// Throws Error unless the frame's normal has unit length within 1e-9.
void check_frame(const AnatomicalFrame& frame);

// Loads an ASCII or binary STL file. Vertices are deduplicated on exact
// coordinate match; triangle count equals the facet count in the file.
// Throws Error on unreadable files, truncated binary STL, or ASCII parse
// errors (with line number).
TriangleMesh load_mesh(const std::filesystem::path& path);

// Writers for both STL flavors. Binary is the 80-byte-header, 50-byte-facet
// little-endian layout; ASCII is the usual solid/facet/vertex text form.
void save_mesh_binary(const TriangleMesh& mesh, const std::filesystem::path& path);
void save_mesh_ascii(const TriangleMesh& mesh, const std::filesystem::path& path,
                     const std::string& name = "mesh");

struct RayHit {
    double t = 0.0; // distance along the ray, mm
    Vec3 point;
};

// All ray-triangle hits with t > 0, sorted ascending by t. Hits landing
// within 1e-9 of a triangle boundary are resolved by re-casting from an
// origin perturbed 1e-6 mm along a cycling axis, so shared-edge and vertex
// hits are counted once. `direction` must be unit length.
std::vector<RayHit> ray_mesh_intersections(const TriangleMesh& mesh, const Vec3& origin,
                                           const Vec3& direction);

} // namespace arcplan
