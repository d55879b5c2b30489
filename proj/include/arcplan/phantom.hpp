// Synthetic closed test solids standing in for patient anatomy: an axis-
// aligned cuboid, a rectangular plate swept along a circular arc (the
// minimal geometry where arc channels beat straight ones), and an arc-swept
// tube. All dimensions in millimeters.
#pragma once

#include "arcplan/mesh_io.hpp"

namespace arcplan {

// Box [0,sx] x [0,sy] x [0,sz], 12 triangles.
TriangleMesh make_cuboid(double sx, double sy, double sz);

struct CPlateParams {
    double mid_radius = 60.0; // mm, radius of the swept mid-surface
    double thickness = 8.0;   // mm, radial
    double sweep_deg = 120.0; // angular extent, centered on the +x axis
    double width = 20.0;      // mm, extrusion along z, centered on z = 0
    int segments = 96;        // angular facet count
};

// Annular-sector plate: r in [mid_radius +/- thickness/2], theta in
// [-sweep/2, +sweep/2] about the z axis, z in [-width/2, +width/2].
TriangleMesh make_c_plate(const CPlateParams& params);

struct TorusSegmentParams {
    double ring_radius = 60.0; // mm, sweep circle radius
    double tube_radius = 6.0;  // mm, cross-section radius
    double sweep_deg = 120.0;  // angular extent, centered on the +x axis
    int ring_segments = 96;
    int tube_segments = 24;
};

// Circular cross-section swept along an arc about the z axis, with flat end
// caps.
TriangleMesh make_torus_segment(const TorusSegmentParams& params);

} // namespace arcplan
