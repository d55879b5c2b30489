#include "arcplan/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "arcplan/error.hpp"

namespace arcplan {

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

Vec3 TriangleMesh::bbox_min() const {
    Vec3 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max());
    for (const Vec3& v : vertices) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        lo.z = std::min(lo.z, v.z);
    }
    return lo;
}

Vec3 TriangleMesh::bbox_max() const {
    Vec3 hi(std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
            std::numeric_limits<double>::lowest());
    for (const Vec3& v : vertices) {
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
        hi.z = std::max(hi.z, v.z);
    }
    return hi;
}

void TriangleMesh::compute_normals() {
    normals.assign(triangles.size(), Vec3());
    for (std::size_t i = 0; i < triangles.size(); ++i) {
        const Triangle& t = triangles[i];
        const Vec3 n = cross(vertices[t.b] - vertices[t.a], vertices[t.c] - vertices[t.a]);
        const double len = norm(n);
        if (len > 0.0) normals[i] = n / len;
    }
}

std::size_t TriangleMesh::validate() {
    const std::uint32_t nv = static_cast<std::uint32_t>(vertices.size());
    for (const Triangle& t : triangles) {
        if (t.a >= nv || t.b >= nv || t.c >= nv)
            throw Error("mesh validation: triangle index out of range");
    }
    constexpr double kMinArea = 1e-9; // mm^2
    std::vector<Triangle> kept;
    kept.reserve(triangles.size());
    for (const Triangle& t : triangles) {
        const double area =
            0.5 * norm(cross(vertices[t.b] - vertices[t.a], vertices[t.c] - vertices[t.a]));
        if (area > kMinArea) kept.push_back(t);
    }
    const std::size_t dropped = triangles.size() - kept.size();
    triangles = std::move(kept);
    compute_normals();
    if (triangles.empty()) throw Error("mesh validation: no non-degenerate triangles");
    const Vec3 lo = bbox_min(), hi = bbox_max();
    if (!(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z))
        throw Error("mesh validation: bounding box has zero extent on some axis");
    return dropped;
}

void check_frame(const AnatomicalFrame& frame) {
    if (std::abs(norm(frame.sagittal_normal) - 1.0) > 1e-9)
        throw Error("anatomical frame: sagittal normal is not unit length");
}

namespace {

struct VertexKey {
    double x, y, z;
    bool operator==(const VertexKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const {
        auto h = [](double d) { return std::hash<std::uint64_t>()(std::bit_cast<std::uint64_t>(d)); };
        std::size_t s = h(k.x);
        s = s * 31 + h(k.y);
        s = s * 31 + h(k.z);
        return s;
    }
};

// Accumulates facets, deduplicating vertices on exact coordinate match.
class MeshBuilder {
public:
    void add_facet(const Vec3& a, const Vec3& b, const Vec3& c) {
        mesh_.triangles.push_back({index_of(a), index_of(b), index_of(c)});
    }

    TriangleMesh take() {
        mesh_.compute_normals();
        return std::move(mesh_);
    }

private:
    std::uint32_t index_of(const Vec3& v) {
        const VertexKey key{v.x, v.y, v.z};
        auto [it, inserted] = seen_.try_emplace(key, static_cast<std::uint32_t>(mesh_.vertices.size()));
        if (inserted) mesh_.vertices.push_back(v);
        return it->second;
    }

    TriangleMesh mesh_;
    std::unordered_map<VertexKey, std::uint32_t, VertexKeyHash> seen_;
};

// STL is little-endian on disk; this code assumes a little-endian host.
static_assert(std::endian::native == std::endian::little);

float read_f32(const char* p) {
    float f;
    std::memcpy(&f, p, 4);
    return f;
}

std::uint32_t read_u32(const char* p) {
    std::uint32_t u;
    std::memcpy(&u, p, 4);
    return u;
}

TriangleMesh parse_binary_stl(const std::string& data, const std::filesystem::path& path) {
    if (data.size() < 84)
        throw Error("binary STL too short: " + path.string());
    const std::uint32_t declared = read_u32(data.data() + 80);
    const std::size_t available = (data.size() - 84) / 50;
    if (available < declared) {
        std::ostringstream msg;
        msg << "truncated binary STL: header declares " << declared << " facets, file contains "
            << available << " (" << path.string() << ")";
        throw Error(msg.str());
    }
    MeshBuilder builder;
    const char* p = data.data() + 84;
    for (std::uint32_t i = 0; i < declared; ++i, p += 50) {
        // 12 bytes of stored normal are skipped; normals are recomputed.
        Vec3 v[3];
        for (int k = 0; k < 3; ++k)
            v[k] = Vec3(read_f32(p + 12 + 12 * k), read_f32(p + 16 + 12 * k),
                        read_f32(p + 20 + 12 * k));
        builder.add_facet(v[0], v[1], v[2]);
    }
    return builder.take();
}

TriangleMesh parse_ascii_stl(const std::string& data, const std::filesystem::path& path) {
    std::istringstream in(data);
    std::string line;
    int line_no = 0;
    MeshBuilder builder;

    auto fail = [&](const std::string& what) -> void {
        std::ostringstream msg;
        msg << "ASCII STL parse error at line " << line_no << ": " << what << " ("
            << path.string() << ")";
        throw Error(msg.str());
    };
    auto next_tokens = [&](std::vector<std::string>& toks) -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            toks.clear();
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (!toks.empty()) return true;
        }
        return false;
    };
    auto parse_double = [&](const std::string& tok) -> double {
        std::size_t pos = 0;
        double val = 0.0;
        try {
            val = std::stod(tok, &pos);
        } catch (const std::exception&) {
            fail("expected a number, got '" + tok + "'");
        }
        if (pos != tok.size()) fail("trailing characters in number '" + tok + "'");
        return val;
    };

    std::vector<std::string> toks;
    if (!next_tokens(toks) || toks[0] != "solid") fail("expected 'solid'");
    while (true) {
        if (!next_tokens(toks)) fail("unexpected end of file, missing 'endsolid'");
        if (toks[0] == "endsolid") break;
        if (toks[0] != "facet" || toks.size() < 2 || toks[1] != "normal" || toks.size() != 5)
            fail("expected 'facet normal nx ny nz'");
        if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "outer" || toks[1] != "loop")
            fail("expected 'outer loop'");
        Vec3 v[3];
        for (int k = 0; k < 3; ++k) {
            if (!next_tokens(toks) || toks.size() != 4 || toks[0] != "vertex")
                fail("expected 'vertex x y z'");
            v[k] = Vec3(parse_double(toks[1]), parse_double(toks[2]), parse_double(toks[3]));
        }
        if (!next_tokens(toks) || toks[0] != "endloop") fail("expected 'endloop'");
        if (!next_tokens(toks) || toks[0] != "endfacet") fail("expected 'endfacet'");
        builder.add_facet(v[0], v[1], v[2]);
    }
    return builder.take();
}

bool starts_with_solid(const std::string& data) {
    std::size_t i = 0;
    while (i < data.size() && std::isspace(static_cast<unsigned char>(data[i]))) ++i;
    return data.compare(i, 5, "solid") == 0;
}

} // namespace

TriangleMesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open mesh file: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    // A file whose length matches the declared facet count exactly is binary,
    // even when the 80-byte header happens to begin with "solid".
    if (data.size() >= 84) {
        const std::uint32_t declared = read_u32(data.data() + 80);
        if (data.size() == 84 + static_cast<std::size_t>(declared) * 50)
            return parse_binary_stl(data, path);
    }
    if (starts_with_solid(data)) return parse_ascii_stl(data, path);
    return parse_binary_stl(data, path);
}

namespace {

void write_f32(std::ostream& os, float f) {
    os.write(reinterpret_cast<const char*>(&f), 4);
}

} // namespace

void save_mesh_binary(const TriangleMesh& mesh, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write mesh file: " + path.string());
    char header[80] = {};
    std::strncpy(header, "arcplan binary STL, millimeters", sizeof(header) - 1);
    os.write(header, 80);
    const std::uint32_t n = static_cast<std::uint32_t>(mesh.triangles.size());
    os.write(reinterpret_cast<const char*>(&n), 4);
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const Triangle& t = mesh.triangles[i];
        const Vec3 nrm = i < mesh.normals.size() ? mesh.normals[i] : Vec3();
        write_f32(os, static_cast<float>(nrm.x));
        write_f32(os, static_cast<float>(nrm.y));
        write_f32(os, static_cast<float>(nrm.z));
        for (std::uint32_t idx : {t.a, t.b, t.c}) {
            const Vec3& v = mesh.vertices[idx];
            write_f32(os, static_cast<float>(v.x));
            write_f32(os, static_cast<float>(v.y));
            write_f32(os, static_cast<float>(v.z));
        }
        const char attr[2] = {0, 0};
        os.write(attr, 2);
    }
    if (!os) throw Error("write failed: " + path.string());
}

void save_mesh_ascii(const TriangleMesh& mesh, const std::filesystem::path& path,
                     const std::string& name) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write mesh file: " + path.string());
    os.precision(9);
    os << "solid " << name << "\n";
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const Triangle& t = mesh.triangles[i];
        const Vec3 nrm = i < mesh.normals.size() ? mesh.normals[i] : Vec3();
        os << "  facet normal " << nrm.x << " " << nrm.y << " " << nrm.z << "\n";
        os << "    outer loop\n";
        for (std::uint32_t idx : {t.a, t.b, t.c}) {
            const Vec3& v = mesh.vertices[idx];
            os << "      vertex " << v.x << " " << v.y << " " << v.z << "\n";
        }
        os << "    endloop\n";
        os << "  endfacet\n";
    }
    os << "endsolid " << name << "\n";
    if (!os) throw Error("write failed: " + path.string());
}

namespace {

constexpr double kBaryEdgeTol = 1e-9;

// Möller-Trumbore. Returns true on a hit with t > 0; sets `graze` when the
// hit (or a near miss) lands within tolerance of the triangle boundary.
bool intersect_triangle(const Vec3& orig, const Vec3& dir, const Vec3& v0, const Vec3& v1,
                        const Vec3& v2, double& t_out, bool& graze) {
    const Vec3 edge1 = v1 - v0;
    const Vec3 edge2 = v2 - v0;
    const Vec3 pvec = cross(dir, edge2);
    const double det = dot(edge1, pvec);
    if (det == 0.0) return false;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = orig - v0;
    const double u = dot(tvec, pvec) * inv_det;
    const Vec3 qvec = cross(tvec, edge1);
    const double v = dot(dir, qvec) * inv_det;
    const double t = dot(edge2, qvec) * inv_det;
    if (t <= 0.0) return false;

    const bool inside = u >= 0.0 && v >= 0.0 && u + v <= 1.0;
    const bool near_band = u >= -kBaryEdgeTol && v >= -kBaryEdgeTol && u + v <= 1.0 + kBaryEdgeTol;
    if (near_band && (u < kBaryEdgeTol || v < kBaryEdgeTol || u + v > 1.0 - kBaryEdgeTol))
        graze = true;
    if (!inside) return false;
    t_out = t;
    return true;
}

} // namespace

std::vector<RayHit> ray_mesh_intersections(const TriangleMesh& mesh, const Vec3& origin,
                                           const Vec3& direction) {
    constexpr double kPerturb = 1e-6; // mm
    constexpr int kMaxAttempts = 7;
    static const Vec3 kAxes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    Vec3 orig = origin;
    std::vector<double> ts;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        ts.clear();
        bool graze = false;
        for (const Triangle& tri : mesh.triangles) {
            double t;
            if (intersect_triangle(orig, direction, mesh.vertices[tri.a], mesh.vertices[tri.b],
                                   mesh.vertices[tri.c], t, graze))
                ts.push_back(t);
        }
        if (!graze) break;
        if (attempt + 1 < kMaxAttempts) orig += kPerturb * kAxes[attempt % 3];
    }
    std::sort(ts.begin(), ts.end());
    // Safety net when perturbation never produced a clean cast: collapse hits
    // at equal parameter (same point reported by triangles sharing an edge).
    std::vector<RayHit> hits;
    for (double t : ts) {
        if (!hits.empty() && t - hits.back().t <= 1e-9) continue;
        hits.push_back({t, orig + t * direction});
    }
    return hits;
}

} // namespace arcplan
