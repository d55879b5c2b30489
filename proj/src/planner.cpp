#include "arcplan/planner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstring>
#include <exception>
#include <ostream>
#include <thread>
#include <vector>

#include "arcplan/error.hpp"

namespace arcplan {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Shortest round-trip decimal form, for the candidate CSV dump.
std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

} // namespace

const char* to_string(PlanMode mode) {
    return mode == PlanMode::arc ? "arc" : "straight";
}

PlanMode plan_mode_from_string(const std::string& s) {
    if (s == "arc") return PlanMode::arc;
    if (s == "straight") return PlanMode::straight;
    throw Error("unknown mode '" + s + "' (expected arc or straight)");
}

void PlanParams::validate() const {
    if (pitch <= 0.0) throw Error("pitch must be positive");
    if (step <= 0.0) throw Error("step must be positive");
    if (connectivity != 6 && connectivity != 26) throw Error("connectivity must be 6 or 26");
    if (min_csv < 0) throw Error("min_csv must be non-negative");
    if (workers < 1) throw Error("workers must be at least 1");
    if (radius_filter.enabled &&
        (radius_filter.min_radius < 0.0 || radius_filter.max_radius < radius_filter.min_radius))
        throw Error("radius filter needs 0 <= min_radius <= max_radius");
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 0xf];
    return s;
}

} // namespace

std::string hash_mesh(const TriangleMesh& mesh) {
    std::uint64_t h = fnv1a(nullptr, 0);
    if (!mesh.vertices.empty())
        h = fnv1a(mesh.vertices.data(), mesh.vertices.size() * sizeof(Vec3), h);
    if (!mesh.triangles.empty())
        h = fnv1a(mesh.triangles.data(), mesh.triangles.size() * sizeof(Triangle), h);
    return hex64(h);
}

PlanContext prepare_context(const TriangleMesh& mesh, const SeedSpec& seeds,
                            const PlanParams& params) {
    params.validate();
    check_frame(seeds.frame);

    PlanContext ctx;
    auto t0 = Clock::now();
    VoxelGrid grid = voxelize(mesh, params.pitch);
    ctx.voxelize_ms = ms_since(t0);

    t0 = Clock::now();
    ctx.field = build_distance_field(grid, params.connectivity);
    ctx.erode_ms = ms_since(t0);

    ctx.lattices = generate_seed_lattices(seeds, mesh, ctx.field.grid, params.inset);

    ctx.occupied = ctx.field.grid.occupied_count();
    for (std::int16_t v : ctx.field.value)
        if (v > ctx.max_depth) ctx.max_depth = v;

    ctx.mesh_hash = hash_mesh(mesh);
    // workers is an execution knob with no effect on the result, so it stays
    // out of the provenance hash
    nlohmann::json hashed_params = to_json(params);
    hashed_params.erase("workers");
    const std::string cfg =
        nlohmann::json{{"seeds", to_json(seeds)}, {"params", hashed_params}}.dump();
    ctx.config_hash = hex64(fnv1a(cfg.data(), cfg.size()));
    return ctx;
}

PlanReport plan_mode(const PlanContext& ctx, PlanMode mode, const PlanParams& params) {
    PlanReport rep;
    rep.mode = mode;
    rep.mesh_hash = ctx.mesh_hash;
    rep.config_hash = ctx.config_hash;
    rep.grid_nx = ctx.field.grid.nx;
    rep.grid_ny = ctx.field.grid.ny;
    rep.grid_nz = ctx.field.grid.nz;
    rep.grid_origin = ctx.field.grid.origin;
    rep.occupied = ctx.occupied;
    rep.max_depth = ctx.max_depth;
    rep.pitch = ctx.field.grid.pitch;
    rep.step = params.step;
    rep.connectivity = params.connectivity;
    rep.min_csv = params.min_csv;
    rep.timing.voxelize_ms = ctx.voxelize_ms;
    rep.timing.erode_ms = ctx.erode_ms;

    const std::size_t entries = ctx.lattices.entry_points.size();
    const int used = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(std::max(1, params.workers)), entries));

    auto t0 = Clock::now();
    std::vector<BestChannelSelector> selectors(used);
    auto run_range = [&](int w) {
        BestChannelSelector& sel = selectors[w];
        auto handle = [&](CandidateRef& cand) {
            if (!params.radius_filter.accepts(cand.channel)) {
                ++sel.stats().skipped_radius;
                return;
            }
            cand.score = score_channel_stats(cand.channel, ctx.field, params.step);
            sel.add(cand);
        };
        const std::size_t b = entries * static_cast<std::size_t>(w) / used;
        const std::size_t e = entries * (static_cast<std::size_t>(w) + 1) / used;
        if (mode == PlanMode::arc)
            enumerate_arcs_range(ctx.lattices, b, e, sel.stats(), handle);
        else
            enumerate_straights_range(ctx.lattices, b, e, sel.stats(), handle);
    };

    if (used == 1) {
        run_range(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(used);
        pool.reserve(used);
        for (int w = 0; w < used; ++w)
            pool.emplace_back([&, w] {
                try {
                    run_range(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    rep.timing.enumerate_score_ms = ms_since(t0);

    t0 = Clock::now();
    for (int w = 1; w < used; ++w) selectors[0].merge(selectors[w]);
    std::optional<CandidateRef> best = selectors[0].best(params.min_csv);
    rep.timing.select_ms = ms_since(t0);
    rep.stats = selectors[0].stats();

    if (best) {
        rep.feasible = true;
        rep.selected = std::move(best);
        // Rescore in full so the report carries the vdva.
        rep.selected->score = score_channel(rep.selected->channel, ctx.field, params.step);
    } else {
        rep.infeasibility = "no viable channel";
    }
    return rep;
}

PlanReport plan(const TriangleMesh& mesh, const SeedSpec& seeds, const PlanParams& params,
                PlanMode mode) {
    return plan_mode(prepare_context(mesh, seeds, params), mode, params);
}

ComparisonReport compare(const PlanContext& ctx, const PlanParams& params) {
    ComparisonReport rep;
    rep.arc = plan_mode(ctx, PlanMode::arc, params);
    rep.straight = plan_mode(ctx, PlanMode::straight, params);
    if (rep.arc.feasible && rep.straight.feasible)
        rep.csv_delta = rep.arc.selected->score.csv - rep.straight.selected->score.csv;
    return rep;
}

ComparisonReport compare(const TriangleMesh& mesh, const SeedSpec& seeds,
                         const PlanParams& params) {
    return compare(prepare_context(mesh, seeds, params), params);
}

void dump_candidates(const PlanContext& ctx, PlanMode mode, const PlanParams& params,
                     std::ostream& out, bool header) {
    if (header)
        out << "entry_idx,mid_idx,exit_idx,length_mm,curvature_per_mm,csv,min_count,mean,feasible\n";
    SelectionStats stats;
    auto row = [&](const CandidateRef& cand) {
        ChannelScore sc = score_channel_stats(cand.channel, ctx.field, params.step);
        out << cand.entry_index << ',' << cand.middle_index << ',' << cand.exit_index << ','
            << fmt(cand.channel.length) << ',' << fmt(cand.channel.curvature) << ',';
        if (sc.feasible)
            out << sc.csv << ',' << sc.min_count << ',' << fmt(sc.mean()) << ",1\n";
        else
            out << "-1,0,-1,0\n";
    };
    if (mode == PlanMode::arc)
        enumerate_arcs(ctx.lattices, stats, row);
    else
        enumerate_straights(ctx.lattices, stats, row);
}

// --- JSON ---

nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw Error("expected a 3-element array for a point");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json to_json(const Channel& ch) {
    nlohmann::json j{
        {"kind", ch.kind == ChannelKind::arc ? "arc" : "straight"},
        {"entry", to_json(ch.entry)},
        {"exit", to_json(ch.exit)},
        {"length_mm", ch.length},
        {"curvature_per_mm", ch.curvature},
    };
    if (ch.kind == ChannelKind::arc) {
        j["mid"] = to_json(ch.mid);
        j["center"] = to_json(ch.center);
        j["radius_mm"] = ch.radius;
        j["plane_normal"] = to_json(ch.plane_normal);
        j["sweep_rad"] = ch.sweep;
    }
    return j;
}

Channel channel_from_json(const nlohmann::json& j) {
    Channel ch;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "arc")
        ch.kind = ChannelKind::arc;
    else if (kind == "straight")
        ch.kind = ChannelKind::straight;
    else
        throw Error("unknown channel kind '" + kind + "'");
    ch.entry = vec3_from_json(j.at("entry"));
    ch.exit = vec3_from_json(j.at("exit"));
    ch.length = j.at("length_mm").get<double>();
    ch.curvature = j.at("curvature_per_mm").get<double>();
    if (ch.kind == ChannelKind::arc) {
        ch.mid = vec3_from_json(j.at("mid"));
        ch.center = vec3_from_json(j.at("center"));
        ch.radius = j.at("radius_mm").get<double>();
        ch.plane_normal = vec3_from_json(j.at("plane_normal"));
        ch.sweep = j.at("sweep_rad").get<double>();
    }
    return ch;
}

nlohmann::json to_json(const SeedSpec& seeds) {
    auto lattice = [](const LatticeSpec& l) {
        return nlohmann::json{{"rows", l.rows}, {"cols", l.cols}, {"spacing_mm", l.spacing}};
    };
    return {
        {"entry", to_json(seeds.entry_seed)},
        {"middle", to_json(seeds.middle_seed)},
        {"exit", to_json(seeds.exit_seed)},
        {"sagittal_origin", to_json(seeds.frame.sagittal_origin)},
        {"sagittal_normal", to_json(seeds.frame.sagittal_normal)},
        {"entry_lattice", lattice(seeds.entry_lattice)},
        {"exit_lattice", lattice(seeds.exit_lattice)},
        {"middle_lattice", lattice(seeds.middle_lattice)},
    };
}

nlohmann::json to_json(const PlanParams& params) {
    nlohmann::json j{
        {"pitch_mm", params.pitch},
        {"step_mm", params.step},
        {"connectivity", params.connectivity},
        {"min_csv", params.min_csv},
        {"inset_mm", params.inset},
        {"workers", params.workers},
    };
    if (params.radius_filter.enabled)
        j["radius_filter"] = {{"min_mm", params.radius_filter.min_radius},
                              {"max_mm", params.radius_filter.max_radius}};
    return j;
}

namespace {

nlohmann::json stats_to_json(const SelectionStats& s) {
    return {
        {"enumerated", s.enumerated},
        {"skipped_coincident", s.skipped_coincident},
        {"skipped_radius", s.skipped_radius},
        {"infeasible", s.infeasible},
        {"feasible", s.feasible},
        {"stage1_best_csv", s.stage1},
        {"stage2_fewest_minima", s.stage2},
        {"stage3_best_mean", s.stage3},
    };
}

} // namespace

nlohmann::json to_json(const PlanReport& rep, bool include_timing) {
    nlohmann::json j;
    j["schema"] = "arc-plan-report/1";
    j["mode"] = to_string(rep.mode);
    j["feasible"] = rep.feasible;
    if (rep.feasible) {
        const CandidateRef& sel = *rep.selected;
        j["infeasibility"] = nullptr;
        j["channel"] = to_json(sel.channel);
        j["seed_indices"] = {{"entry", sel.entry_index},
                             {"middle", sel.middle_index},
                             {"exit", sel.exit_index}};
        j["length_mm"] = sel.channel.length;
        j["curvature_per_mm"] = sel.channel.curvature;
        j["csv"] = sel.score.csv;
        j["score"] = {{"csv", sel.score.csv},
                      {"min_count", sel.score.min_count},
                      {"vdva_sum", sel.score.vdva_sum},
                      {"sample_count", sel.score.sample_count},
                      {"mean", sel.score.mean()},
                      {"vdva", sel.score.vdva}};
        nlohmann::json line = nlohmann::json::array();
        for (const Vec3& p : sample_channel(sel.channel, rep.step)) line.push_back(to_json(p));
        j["polyline"] = std::move(line);
    } else {
        j["infeasibility"] = rep.infeasibility;
        j["channel"] = nullptr;
        j["seed_indices"] = nullptr;
        j["length_mm"] = nullptr;
        j["curvature_per_mm"] = nullptr;
        j["csv"] = nullptr;
        j["score"] = nullptr;
        j["polyline"] = nullptr;
    }
    j["candidates"] = stats_to_json(rep.stats);
    j["grid"] = {{"nx", rep.grid_nx},       {"ny", rep.grid_ny},
                 {"nz", rep.grid_nz},       {"origin", to_json(rep.grid_origin)},
                 {"pitch_mm", rep.pitch},   {"occupied", rep.occupied},
                 {"max_depth", rep.max_depth}};
    j["params"] = {{"step_mm", rep.step},
                   {"connectivity", rep.connectivity},
                   {"min_csv", rep.min_csv}};
    j["provenance"] = {{"mesh_hash", rep.mesh_hash}, {"config_hash", rep.config_hash}};
    if (include_timing)
        j["timing_ms"] = {{"voxelize", rep.timing.voxelize_ms},
                          {"erode", rep.timing.erode_ms},
                          {"enumerate_score", rep.timing.enumerate_score_ms},
                          {"select", rep.timing.select_ms}};
    return j;
}

nlohmann::json to_json(const ComparisonReport& rep, bool include_timing) {
    nlohmann::json j;
    j["schema"] = "arc-plan-comparison/1";
    j["arc"] = to_json(rep.arc, include_timing);
    j["straight"] = to_json(rep.straight, include_timing);
    j["csv_delta"] = rep.csv_delta ? nlohmann::json(*rep.csv_delta) : nlohmann::json(nullptr);
    j["verdicts"] = {{"arc", rep.arc.feasible ? "feasible" : "no viable channel"},
                     {"straight", rep.straight.feasible ? "feasible" : "no viable channel"}};
    return j;
}

} // namespace arcplan
