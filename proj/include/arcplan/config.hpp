// Run configuration: a single JSON file naming the mesh, the three seed
// points with their sagittal frame, lattice dimensions, numeric parameters,
// and output artifact paths. Relative paths inside the file resolve against
// the file's own directory, so a config travels with its inputs.
#pragma once

#include <filesystem>
#include <string>

#include "arcplan/planner.hpp"
#include "arcplan/seeding.hpp"
#include "json.hpp"

namespace arcplan {

struct OutputSpec {
    std::filesystem::path report;       // empty -> report JSON goes to stdout
    std::filesystem::path polyline_ply; // selected-channel centerline
    std::filesystem::path tube_stl;     // selected-channel swept tube
    double tube_radius = 3.0;           // mm
    std::filesystem::path candidates_csv;
    std::filesystem::path field_dump; // used by the voxelize subcommand
};

struct PlannerConfig {
    std::filesystem::path mesh;
    std::string mode = "arc"; // arc | straight | compare
    SeedSpec seeds;
    PlanParams params;
    OutputSpec output;

    void validate() const; // throws Error with a one-line message
};

// Strict parse: unknown keys are errors, seed vectors are normalized where a
// direction is expected, numeric ranges are checked. base_dir anchors
// relative paths (pass the config file's directory).
PlannerConfig config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
PlannerConfig load_config(const std::filesystem::path& path);

} // namespace arcplan
