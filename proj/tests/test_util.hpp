// Shared scaffolding for the test binaries: scratch directories, small file
// helpers, and simple analytic meshes. Kept header-only; each test binary
// provides its own main.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "arcplan/mesh_io.hpp"

namespace testutil {

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        std::ostringstream name;
        name << "arcplan-" << tag << "-" << std::hex << rd();
        path_ = std::filesystem::temp_directory_path() / name.str();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Axis-aligned box with outward-facing triangles.
inline arcplan::TriangleMesh box_mesh(const arcplan::Vec3& lo, const arcplan::Vec3& hi) {
    arcplan::TriangleMesh m;
    m.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {lo.x, hi.y, lo.z}, {hi.x, hi.y, lo.z},
                  {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {lo.x, hi.y, hi.z}, {hi.x, hi.y, hi.z}};
    auto quad = [&](int a, int b, int c, int d) {
        m.triangles.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                               static_cast<std::uint32_t>(c)});
        m.triangles.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c),
                               static_cast<std::uint32_t>(d)});
    };
    quad(0, 2, 3, 1);
    quad(4, 5, 7, 6);
    quad(0, 1, 5, 4);
    quad(2, 6, 7, 3);
    quad(0, 4, 6, 2);
    quad(1, 3, 7, 5);
    m.compute_normals();
    return m;
}

// Latitude-longitude sphere approximation.
inline arcplan::TriangleMesh uv_sphere(const arcplan::Vec3& c, double r, int slices, int stacks) {
    arcplan::TriangleMesh m;
    for (int i = 0; i <= stacks; ++i) {
        const double phi = M_PI * i / stacks;
        for (int j = 0; j < slices; ++j) {
            const double theta = 2.0 * M_PI * j / slices;
            m.vertices.push_back(c + r * arcplan::Vec3(std::sin(phi) * std::cos(theta),
                                                       std::sin(phi) * std::sin(theta),
                                                       std::cos(phi)));
        }
    }
    auto at = [&](int i, int j) { return static_cast<std::uint32_t>(i * slices + (j % slices)); };
    for (int i = 0; i < stacks; ++i)
        for (int j = 0; j < slices; ++j) {
            m.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            m.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    m.compute_normals();
    return m;
}

} // namespace testutil
