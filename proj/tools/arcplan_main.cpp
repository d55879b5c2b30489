// Command-line front end: plan | compare | voxelize | inspect | phantom.
// Exit codes: 0 success, 2 "no viable channel", 1 any error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "arcplan/config.hpp"
#include "arcplan/error.hpp"
#include "arcplan/phantom.hpp"
#include "arcplan/planner.hpp"

namespace fs = std::filesystem;
using namespace arcplan;

namespace {

// All artifact writes go through a temp file + rename so a crash never
// leaves a half-written output behind.
void write_text_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

template <typename Writer>
void write_atomic(const fs::path& path, Writer&& writer) {
    fs::path tmp = path;
    tmp += ".tmp";
    writer(tmp);
    fs::rename(tmp, path);
}

// Flag overrides layered on top of the config file. Paths given as flags are
// used as typed (relative to the working directory), unlike paths inside the
// config, which resolve against the config file.
struct Overrides {
    std::string mode, mesh, report;
    double pitch = -1.0, step = -1.0;
    int connectivity = 0, min_csv = -1, workers = 0;
    bool deterministic = false;

    void apply(PlannerConfig& cfg) const {
        if (!mode.empty()) cfg.mode = mode;
        if (!mesh.empty()) cfg.mesh = mesh;
        if (!report.empty()) cfg.output.report = report;
        if (pitch > 0.0) cfg.params.pitch = pitch;
        if (step > 0.0) cfg.params.step = step;
        if (connectivity != 0) cfg.params.connectivity = connectivity;
        if (min_csv >= 0) cfg.params.min_csv = min_csv;
        if (workers > 0) cfg.params.workers = workers;
        cfg.validate();
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov, bool with_mode) {
    if (with_mode) cmd->add_option("--mode", ov.mode, "arc or straight (overrides config)");
    cmd->add_option("--mesh", ov.mesh, "mesh path (overrides config)");
    cmd->add_option("--report", ov.report, "report path (overrides config)");
    cmd->add_option("--pitch", ov.pitch, "voxel pitch, mm");
    cmd->add_option("--step", ov.step, "sampling step, mm");
    cmd->add_option("--connectivity", ov.connectivity, "erosion connectivity, 6 or 26");
    cmd->add_option("--min-csv", ov.min_csv, "feasibility floor on the safety score");
    cmd->add_option("--workers", ov.workers, "enumeration worker threads");
    cmd->add_flag("--deterministic", ov.deterministic,
                  "omit timing fields so identical runs give byte-identical reports");
}

TriangleMesh load_input_mesh(const PlannerConfig& cfg) {
    TriangleMesh mesh = load_mesh(cfg.mesh);
    mesh.validate();
    return mesh;
}

void emit_report(const nlohmann::json& j, const fs::path& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_text_atomic(path, text);
}

void export_channel_artifacts(const PlanReport& rep, const PlannerConfig& cfg) {
    if (cfg.output.polyline_ply.empty() && cfg.output.tube_stl.empty()) return;
    if (!rep.feasible) {
        std::cerr << "note: no viable channel; skipping geometry exports\n";
        return;
    }
    const Channel& ch = rep.selected->channel;
    const double step = cfg.params.step;
    if (!cfg.output.polyline_ply.empty())
        write_atomic(cfg.output.polyline_ply,
                     [&](const fs::path& p) { write_polyline_ply(sample_channel(ch, step), p); });
    if (!cfg.output.tube_stl.empty())
        write_atomic(cfg.output.tube_stl, [&](const fs::path& p) {
            save_mesh_binary(make_tube_mesh(ch, step, cfg.output.tube_radius), p);
        });
}

int run_plan(const fs::path& config_path, const Overrides& ov) {
    PlannerConfig cfg = load_config(config_path);
    ov.apply(cfg);
    if (cfg.mode == "compare")
        throw Error("mode is 'compare'; use the compare subcommand or pass --mode arc|straight");
    const PlanMode mode = plan_mode_from_string(cfg.mode);

    const TriangleMesh mesh = load_input_mesh(cfg);
    const PlanContext ctx = prepare_context(mesh, cfg.seeds, cfg.params);
    const PlanReport rep = plan_mode(ctx, mode, cfg.params);

    emit_report(to_json(rep, !ov.deterministic), cfg.output.report);
    export_channel_artifacts(rep, cfg);
    if (!cfg.output.candidates_csv.empty())
        write_atomic(cfg.output.candidates_csv, [&](const fs::path& p) {
            std::ofstream out(p);
            if (!out) throw Error("cannot write " + p.string());
            dump_candidates(ctx, mode, cfg.params, out);
        });
    return rep.feasible ? 0 : 2;
}

int run_compare(const fs::path& config_path, const Overrides& ov) {
    PlannerConfig cfg = load_config(config_path);
    ov.apply(cfg);
    const TriangleMesh mesh = load_input_mesh(cfg);
    const PlanContext ctx = prepare_context(mesh, cfg.seeds, cfg.params);
    const ComparisonReport rep = compare(ctx, cfg.params);

    emit_report(to_json(rep, !ov.deterministic), cfg.output.report);
    export_channel_artifacts(rep.arc.feasible ? rep.arc : rep.straight, cfg);
    if (!cfg.output.candidates_csv.empty())
        write_atomic(cfg.output.candidates_csv, [&](const fs::path& p) {
            std::ofstream out(p);
            if (!out) throw Error("cannot write " + p.string());
            dump_candidates(ctx, PlanMode::arc, cfg.params, out);
            dump_candidates(ctx, PlanMode::straight, cfg.params, out, /*header=*/false);
        });
    return rep.arc.feasible || rep.straight.feasible ? 0 : 2;
}

int run_voxelize(const fs::path& config_path, const Overrides& ov, const std::string& out_flag) {
    PlannerConfig cfg = load_config(config_path);
    ov.apply(cfg);
    const fs::path out = out_flag.empty() ? cfg.output.field_dump : fs::path(out_flag);
    if (out.empty())
        throw Error("no output path: set output.field_dump in the config or pass --out");

    const TriangleMesh mesh = load_input_mesh(cfg);
    const VoxelGrid grid = voxelize(mesh, cfg.params.pitch);
    const VoxelDistanceField field = build_distance_field(grid, cfg.params.connectivity);
    write_atomic(out, [&](const fs::path& p) { dump_field(field, p); });

    std::int16_t max_depth = 0;
    for (std::int16_t v : field.value)
        if (v > max_depth) max_depth = v;
    std::cout << "grid " << grid.nx << "x" << grid.ny << "x" << grid.nz << " pitch " << grid.pitch
              << " mm, occupied " << grid.occupied_count() << ", max depth " << max_depth << ", wrote "
              << out.string() << "\n";
    return 0;
}

int run_inspect(const std::string& mesh_flag, const std::string& config_flag, double pitch,
                int connectivity) {
    std::string mesh_path = mesh_flag;
    PlanParams params;
    if (!config_flag.empty()) {
        const PlannerConfig cfg = load_config(config_flag);
        params = cfg.params;
        if (mesh_path.empty()) mesh_path = cfg.mesh.string();
    }
    if (mesh_path.empty()) throw Error("inspect needs --mesh or --config");
    if (pitch > 0.0) params.pitch = pitch;
    if (connectivity != 0) params.connectivity = connectivity;
    params.validate();

    TriangleMesh mesh = load_mesh(mesh_path);
    const std::size_t dropped = mesh.validate();
    const Vec3 lo = mesh.bbox_min(), hi = mesh.bbox_max(), ext = hi - lo;
    std::cout << "mesh: " << mesh_path << "\n"
              << "  vertices " << mesh.vertex_count() << ", triangles " << mesh.triangle_count();
    if (dropped) std::cout << " (" << dropped << " degenerate dropped)";
    std::cout << "\n  bbox min " << lo << " max " << hi << " extent " << ext << " mm\n";

    const VoxelGrid grid = voxelize(mesh, params.pitch);
    const VoxelDistanceField field = build_distance_field(grid, params.connectivity);
    std::int16_t max_depth = 0;
    for (std::int16_t v : field.value)
        if (v > max_depth) max_depth = v;
    const std::size_t occ = grid.occupied_count();
    std::cout << "grid: " << grid.nx << "x" << grid.ny << "x" << grid.nz << " at pitch "
              << grid.pitch << " mm\n"
              << "  occupied " << occ << " of " << grid.voxel_count() << " voxels, max erosion depth "
              << max_depth << " (connectivity " << params.connectivity << ")\n";
    return 0;
}

struct PhantomOpts {
    std::string name, out;
    bool ascii = false;
    double sx = 40.0, sy = 20.0, sz = 20.0;
    CPlateParams plate;
    TorusSegmentParams torus;
};

int run_phantom(const PhantomOpts& o) {
    TriangleMesh mesh;
    if (o.name == "cuboid")
        mesh = make_cuboid(o.sx, o.sy, o.sz);
    else if (o.name == "c_plate")
        mesh = make_c_plate(o.plate);
    else if (o.name == "torus_segment")
        mesh = make_torus_segment(o.torus);
    else
        throw Error("unknown phantom '" + o.name + "' (cuboid, c_plate, torus_segment)");

    write_atomic(o.out, [&](const fs::path& p) {
        if (o.ascii)
            save_mesh_ascii(mesh, p, o.name);
        else
            save_mesh_binary(mesh, p);
    });
    std::cout << o.name << ": " << mesh.vertex_count() << " vertices, " << mesh.triangle_count()
              << " triangles -> " << o.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-curvature fixation channel planner"};
    app.require_subcommand(1);
    int rc = 0;

    std::string plan_config;
    Overrides plan_ov;
    CLI::App* plan_cmd = app.add_subcommand("plan", "search one mode and write a report");
    plan_cmd->add_option("--config", plan_config, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    add_override_flags(plan_cmd, plan_ov, /*with_mode=*/true);
    plan_cmd->callback([&] { rc = run_plan(plan_config, plan_ov); });

    std::string cmp_config;
    Overrides cmp_ov;
    CLI::App* cmp_cmd = app.add_subcommand("compare", "arc vs straight on a shared field");
    cmp_cmd->add_option("--config", cmp_config, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    add_override_flags(cmp_cmd, cmp_ov, /*with_mode=*/false);
    cmp_cmd->callback([&] { rc = run_compare(cmp_config, cmp_ov); });

    std::string vox_config, vox_out;
    Overrides vox_ov;
    CLI::App* vox_cmd = app.add_subcommand("voxelize", "write the distance-field debug dump");
    vox_cmd->add_option("--config", vox_config, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    vox_cmd->add_option("--out", vox_out, "dump path (overrides config output.field_dump)");
    add_override_flags(vox_cmd, vox_ov, /*with_mode=*/false);
    vox_cmd->callback([&] { rc = run_voxelize(vox_config, vox_ov, vox_out); });

    std::string ins_mesh, ins_config;
    double ins_pitch = -1.0;
    int ins_conn = 0;
    CLI::App* ins_cmd = app.add_subcommand("inspect", "print mesh and grid statistics");
    ins_cmd->add_option("--mesh", ins_mesh, "mesh path")->check(CLI::ExistingFile);
    ins_cmd->add_option("--config", ins_config, "read mesh and params from a config")
        ->check(CLI::ExistingFile);
    ins_cmd->add_option("--pitch", ins_pitch, "voxel pitch, mm");
    ins_cmd->add_option("--connectivity", ins_conn, "erosion connectivity, 6 or 26");
    ins_cmd->callback([&] { rc = run_inspect(ins_mesh, ins_config, ins_pitch, ins_conn); });

    PhantomOpts ph;
    CLI::App* ph_cmd = app.add_subcommand("phantom", "generate a synthetic test solid as STL");
    ph_cmd->add_option("--name", ph.name, "cuboid | c_plate | torus_segment")->required();
    ph_cmd->add_option("--out", ph.out, "output STL path")->required();
    ph_cmd->add_flag("--ascii", ph.ascii, "write ASCII STL instead of binary");
    ph_cmd->add_option("--sx", ph.sx, "cuboid x side, mm");
    ph_cmd->add_option("--sy", ph.sy, "cuboid y side, mm");
    ph_cmd->add_option("--sz", ph.sz, "cuboid z side, mm");
    ph_cmd->add_option("--mid-radius", ph.plate.mid_radius, "c_plate mid-surface radius, mm");
    ph_cmd->add_option("--thickness", ph.plate.thickness, "c_plate radial thickness, mm");
    ph_cmd->add_option("--width", ph.plate.width, "c_plate z extrusion, mm");
    ph_cmd->add_option("--segments", ph.plate.segments, "c_plate angular facets");
    ph_cmd->add_option("--sweep-deg", ph.plate.sweep_deg, "angular extent, degrees");
    ph_cmd->add_option("--ring-radius", ph.torus.ring_radius, "torus sweep radius, mm");
    ph_cmd->add_option("--tube-radius", ph.torus.tube_radius, "torus tube radius, mm");
    ph_cmd->add_option("--ring-segments", ph.torus.ring_segments, "torus sweep facets");
    ph_cmd->add_option("--tube-segments", ph.torus.tube_segments, "torus cross-section facets");
    ph_cmd->callback([&] {
        ph.torus.sweep_deg = ph.plate.sweep_deg; // --sweep-deg applies to either shape
        rc = run_phantom(ph);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
