// Pipeline orchestration: voxelize -> erode -> seed -> enumerate -> score ->
// select, for arc and straight modes, plus the JSON report schema. A
// comparison run computes the distance field once and shares it read-only
// between the two modes.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "arcplan/channel_scoring.hpp"
#include "arcplan/channel_selection.hpp"
#include "arcplan/mesh_io.hpp"
#include "arcplan/seeding.hpp"
#include "arcplan/voxel_field.hpp"
#include "json.hpp"

namespace arcplan {

enum class PlanMode { arc, straight };

const char* to_string(PlanMode mode);
PlanMode plan_mode_from_string(const std::string& s);

// Numeric knobs of a planning run (seed placement lives in SeedSpec).
struct PlanParams {
    double pitch = 1.0;   // mm, voxel edge
    double step = 1.0;    // mm, sampling interval
    int connectivity = 6; // 6 | 26
    int min_csv = 1;      // feasibility floor on the safety score
    double inset = -1.0;  // mm entry/exit inset; negative -> use pitch
    RadiusFilter radius_filter;
    int workers = 1;

    void validate() const; // throws Error on out-of-range values
};

struct StageTiming {
    double voxelize_ms = 0.0;
    double erode_ms = 0.0;
    double enumerate_score_ms = 0.0;
    double select_ms = 0.0;
};

// Everything the per-mode search needs, computed once per mesh + params.
struct PlanContext {
    VoxelDistanceField field;
    SeedLattices lattices;
    std::int16_t max_depth = 0;
    std::size_t occupied = 0;
    double voxelize_ms = 0.0, erode_ms = 0.0;
    std::string mesh_hash;
    std::string config_hash;
};

struct PlanReport {
    PlanMode mode = PlanMode::arc;
    bool feasible = false;
    std::string infeasibility;            // set iff !feasible
    std::optional<CandidateRef> selected; // score carries the full vdva
    SelectionStats stats;
    StageTiming timing;

    // Run provenance, enough to reproduce the result bit-for-bit.
    std::string mesh_hash, config_hash;
    int grid_nx = 0, grid_ny = 0, grid_nz = 0;
    Vec3 grid_origin;
    std::size_t occupied = 0;
    std::int16_t max_depth = 0;
    double pitch = 1.0, step = 1.0;
    int connectivity = 6, min_csv = 1;
};

struct ComparisonReport {
    PlanReport arc;
    PlanReport straight;
    std::optional<int> csv_delta; // arc csv - straight csv, when both feasible
};

PlanContext prepare_context(const TriangleMesh& mesh, const SeedSpec& seeds,
                            const PlanParams& params);

// Search one mode over a prepared context. Infeasibility ("no viable
// channel") is a normal report, not an Error.
PlanReport plan_mode(const PlanContext& ctx, PlanMode mode, const PlanParams& params);

PlanReport plan(const TriangleMesh& mesh, const SeedSpec& seeds, const PlanParams& params,
                PlanMode mode);
ComparisonReport compare(const PlanContext& ctx, const PlanParams& params);
ComparisonReport compare(const TriangleMesh& mesh, const SeedSpec& seeds,
                         const PlanParams& params);

// Scores every candidate of the mode and streams CSV rows: entry_idx,
// mid_idx, exit_idx, length_mm, curvature_per_mm, csv, min_count, mean,
// feasible. mid_idx is -1 for straight candidates. Pass header = false when
// appending a second mode to the same stream.
void dump_candidates(const PlanContext& ctx, PlanMode mode, const PlanParams& params,
                     std::ostream& out, bool header = true);

// 64-bit FNV-1a, the hash behind the provenance fields.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t seed = 14695981039346656037ull);
std::string hash_mesh(const TriangleMesh& mesh);

// --- JSON schema (stable; see README) ---

nlohmann::json to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);

// Channel geometry serializes every field point_at depends on, with
// round-trip double formatting, so a reloaded channel resamples identically.
nlohmann::json to_json(const Channel& ch);
Channel channel_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeedSpec& seeds);
nlohmann::json to_json(const PlanParams& params);
nlohmann::json to_json(const PlanReport& report, bool include_timing = true);
nlohmann::json to_json(const ComparisonReport& report, bool include_timing = true);

} // namespace arcplan
