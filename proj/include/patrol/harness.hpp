#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "patrol/dynamics.hpp"
#include "patrol/graph.hpp"
#include "patrol/metrics.hpp"

namespace patrol {

// A graph argument: either a file path or an inline "grid:RxC:W" spec.
struct GraphSpec {
    std::string name;
    std::string path;  // empty for generated grids
    bool is_grid = false;
    int rows = 0, cols = 0;
    double weight = 0.0;
};

GraphSpec parse_graph_spec(const std::string& text);
PatrolGraph resolve_graph(const GraphSpec& spec);

// A profile argument inside a plan: "none", a generator kind with parameter
// overrides (JSON object), or a pre-generated profile file.
struct ProfileSpec {
    std::string name;
    std::string kind;         // none | blockages | fast_walk | smooth_walk | file
    std::string path;         // when kind == "file"
    std::string params_json;  // overrides for generator defaults
};

// Generator parameter structs from a JSON object with per-field overrides.
BlockageParams blockage_params_from_json(const std::string& params_json);
FastWalkParams fast_walk_params_from_json(const std::string& params_json);
SmoothWalkParams smooth_walk_params_from_json(const std::string& params_json);

// Dispatch on kind; empty optional for "none".
std::optional<DynamicProfile> build_profile(const ProfileSpec& spec, const PatrolGraph& g,
                                            double horizon, std::uint64_t seed);

// A full factorial experiment: graphs x profiles x strategies x methods x
// team sizes x noise sigmas x repeats.
struct ExperimentPlan {
    std::uint64_t seed = 1;
    double duration = 2500.0;
    double tick = 1.0;
    double phi = 0.0025;
    int repeats = 5;
    std::string output_dir = "out";
    std::vector<GraphSpec> graphs;
    std::vector<ProfileSpec> profiles;
    std::vector<std::string> strategies;
    std::vector<std::string> methods;
    std::vector<int> team_sizes;
    std::vector<double> noise_sigmas{0.0};
};

ExperimentPlan load_plan(const std::string& path);
ExperimentPlan plan_from_json_string(const std::string& text);

// One run of the expanded factorial. Placement and noise seeds derive from
// (plan seed, graph index, repeat) and the profile realization seed from
// (plan seed, graph index, profile index, repeat), so runs differing only in
// strategy, method, team size, noise level, or profile share what they need
// to be compared as matched pairs.
struct PlannedRun {
    GraphSpec graph;
    ProfileSpec profile;
    std::string strategy;
    std::string method;
    int team_size = 1;
    int repeat = 0;
    double noise_sigma = 0.0;
    std::uint64_t run_seed = 0;
    std::uint64_t profile_seed = 0;
    std::uint64_t noise_seed = 0;
    std::string key;  // unique, filesystem-safe
};

std::vector<PlannedRun> expand_plan(const ExperimentPlan& plan);

struct ExperimentResult {
    std::string output_dir;
    std::string manifest_path;
    int executed = 0;
    int skipped = 0;  // records already present from an earlier run
};

// Executes all planned runs (up to `jobs` in parallel; results are
// independent of execution order), writing one summary per run plus a
// manifest. Existing valid records are skipped, so an interrupted batch
// resumes where it stopped. output_dir_override, when non-empty, replaces
// the plan's output_dir; the PATROL_OUTPUT_ROOT env var prefixes relative
// output dirs.
ExperimentResult run_experiment(const ExperimentPlan& plan, int jobs = 0,
                                const std::string& output_dir_override = "");

// Entries for analysis, read back from a manifest and its run summaries.
// Throws if any listed record is missing: analysis never silently drops
// scenarios.
std::vector<RunEntry> load_manifest_entries(const std::string& manifest_path);

// Emits the analysis bundle into out_dir:
//   long.csv                 scenario,method,strategy,n,seed,mean_idleness
//   table_by_profile.csv     mean idleness relative to reference_method
//   table_by_team_size.csv   same, aggregated over dynamic profiles
//   table_dynamics_impact.csv  reference method vs the static environment
//   table_noise.csv          per-sigma ratios (when several sigmas present)
//   stats.json               per-method aggregates + Wilcoxon per method pair
void write_analysis(const std::vector<RunEntry>& entries,
                    const std::string& reference_method, const std::string& out_dir);

}  // namespace patrol
