#include "arcplan/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "arcplan/error.hpp"

namespace arcplan {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const char* where, std::initializer_list<std::string_view> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (std::string_view k : allowed)
            if (k == it.key()) {
                known = true;
                break;
            }
        if (!known)
            throw Error("config: unknown key '" + it.key() + "' in " + where);
    }
}

const json& require(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw Error(std::string("config: missing '") + key + "' in " + where);
    return *it;
}

Vec3 read_point(const json& j, const char* label) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        throw Error(std::string("config: ") + label + " must be a [x, y, z] number array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec3 read_direction(const json& j, const char* label) {
    const Vec3 v = read_point(j, label);
    const double n = norm(v);
    if (n <= 0.0)
        throw Error(std::string("config: ") + label + " must be a nonzero vector");
    return v / n;
}

LatticeSpec read_lattice(const json& j, const char* where, const LatticeSpec& defaults) {
    expect_keys(j, where, {"rows", "cols", "spacing_mm"});
    LatticeSpec l = defaults;
    if (auto it = j.find("rows"); it != j.end()) l.rows = it->get<int>();
    if (auto it = j.find("cols"); it != j.end()) l.cols = it->get<int>();
    if (auto it = j.find("spacing_mm"); it != j.end()) l.spacing = it->get<double>();
    if (l.rows < 1 || l.cols < 1)
        throw Error(std::string("config: ") + where + ".rows/cols must be at least 1");
    if (l.spacing <= 0.0)
        throw Error(std::string("config: ") + where + ".spacing_mm must be positive");
    return l;
}

std::filesystem::path resolve(const std::filesystem::path& p,
                              const std::filesystem::path& base) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

} // namespace

void PlannerConfig::validate() const {
    if (mesh.empty()) throw Error("config: 'mesh' path is required");
    if (mode != "arc" && mode != "straight" && mode != "compare")
        throw Error("config: mode must be arc, straight, or compare (got '" + mode + "')");
    params.validate();
    if (output.tube_radius <= 0.0)
        throw Error("config: output.tube_radius_mm must be positive");
    for (const LatticeSpec* l : {&seeds.entry_lattice, &seeds.exit_lattice, &seeds.middle_lattice})
        if (l->rows < 1 || l->cols < 1 || l->spacing <= 0.0)
            throw Error("config: lattice rows/cols must be >= 1 and spacing_mm positive");
}

PlannerConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw Error("config: top level must be a JSON object");
    expect_keys(j, "the top level",
                {"mesh", "mode", "pitch_mm", "step_mm", "connectivity", "min_csv", "inset_mm",
                 "workers", "radius_filter", "seeds", "lattices", "output"});

    PlannerConfig cfg;
    try {
        cfg.mesh = resolve(require(j, "mesh", "the top level").get<std::string>(), base_dir);
        if (auto it = j.find("mode"); it != j.end()) cfg.mode = it->get<std::string>();
        if (auto it = j.find("pitch_mm"); it != j.end()) cfg.params.pitch = it->get<double>();
        if (auto it = j.find("step_mm"); it != j.end()) cfg.params.step = it->get<double>();
        if (auto it = j.find("connectivity"); it != j.end())
            cfg.params.connectivity = it->get<int>();
        if (auto it = j.find("min_csv"); it != j.end()) cfg.params.min_csv = it->get<int>();
        if (auto it = j.find("inset_mm"); it != j.end()) cfg.params.inset = it->get<double>();
        if (auto it = j.find("workers"); it != j.end()) cfg.params.workers = it->get<int>();

        if (auto it = j.find("radius_filter"); it != j.end()) {
            expect_keys(*it, "radius_filter", {"min_mm", "max_mm"});
            cfg.params.radius_filter.enabled = true;
            cfg.params.radius_filter.min_radius =
                require(*it, "min_mm", "radius_filter").get<double>();
            cfg.params.radius_filter.max_radius =
                require(*it, "max_mm", "radius_filter").get<double>();
        }

        const json& seeds = require(j, "seeds", "the top level");
        expect_keys(seeds, "seeds",
                    {"entry", "middle", "exit", "sagittal_origin", "sagittal_normal"});
        cfg.seeds.entry_seed = read_point(require(seeds, "entry", "seeds"), "seeds.entry");
        cfg.seeds.middle_seed = read_point(require(seeds, "middle", "seeds"), "seeds.middle");
        cfg.seeds.exit_seed = read_point(require(seeds, "exit", "seeds"), "seeds.exit");
        cfg.seeds.frame.sagittal_origin =
            read_point(require(seeds, "sagittal_origin", "seeds"), "seeds.sagittal_origin");
        cfg.seeds.frame.sagittal_normal =
            read_direction(require(seeds, "sagittal_normal", "seeds"), "seeds.sagittal_normal");

        if (auto it = j.find("lattices"); it != j.end()) {
            expect_keys(*it, "lattices", {"entry", "exit", "middle"});
            if (auto l = it->find("entry"); l != it->end())
                cfg.seeds.entry_lattice = read_lattice(*l, "lattices.entry", cfg.seeds.entry_lattice);
            if (auto l = it->find("exit"); l != it->end())
                cfg.seeds.exit_lattice = read_lattice(*l, "lattices.exit", cfg.seeds.exit_lattice);
            if (auto l = it->find("middle"); l != it->end())
                cfg.seeds.middle_lattice =
                    read_lattice(*l, "lattices.middle", cfg.seeds.middle_lattice);
        }

        if (auto it = j.find("output"); it != j.end()) {
            expect_keys(*it, "output",
                        {"report", "polyline_ply", "tube_stl", "tube_radius_mm",
                         "candidates_csv", "field_dump"});
            auto path = [&](const char* key) -> std::filesystem::path {
                auto p = it->find(key);
                return p == it->end() ? std::filesystem::path()
                                      : resolve(p->get<std::string>(), base_dir);
            };
            cfg.output.report = path("report");
            cfg.output.polyline_ply = path("polyline_ply");
            cfg.output.tube_stl = path("tube_stl");
            cfg.output.candidates_csv = path("candidates_csv");
            cfg.output.field_dump = path("field_dump");
            if (auto p = it->find("tube_radius_mm"); p != it->end())
                cfg.output.tube_radius = p->get<double>();
        }
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }

    cfg.validate();
    return cfg;
}

PlannerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

} // namespace arcplan
