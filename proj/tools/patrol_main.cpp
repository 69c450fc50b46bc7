// Command-line front end: profile generation, traffic ingestion, single
// runs, factorial experiment batches, and analysis table emission.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "patrol/dynamics.hpp"
#include "patrol/engine.hpp"
#include "patrol/harness.hpp"
#include "patrol/metrics.hpp"

namespace {

using namespace patrol;

struct GenerateProfileArgs {
    std::string graph;
    std::string kind;
    std::string out;
    double horizon = 2500.0;
    std::uint64_t seed = 0;
    double sample_interval = 10.0;
    bool shared = false;
    // blockages
    double block_scale = 0.1;
    double mean_block = 500.0;
    double mean_gap = 2000.0;
    // walks
    double step_sigma = -1.0;  // negative: kind-specific default
    double floor = 0.05;
    double momentum = 0.5;
    int window = 20;
};

int cmd_generate_profile(const GenerateProfileArgs& a) {
    const PatrolGraph g = resolve_graph(parse_graph_spec(a.graph));
    DynamicProfile p;
    if (a.kind == "blockages") {
        BlockageParams params;
        params.block_scale = a.block_scale;
        params.mean_block_duration = a.mean_block;
        params.mean_gap_duration = a.mean_gap;
        params.sample_interval = a.sample_interval;
        params.shared = a.shared;
        p = generate_blockages(g, a.horizon, a.seed, params);
    } else if (a.kind == "fast_walk") {
        FastWalkParams params;
        if (a.step_sigma >= 0.0) params.step_sigma = a.step_sigma;
        params.floor = a.floor;
        params.sample_interval = a.sample_interval;
        params.shared = a.shared;
        p = generate_fast_walk(g, a.horizon, a.seed, params);
    } else if (a.kind == "smooth_walk") {
        SmoothWalkParams params;
        if (a.step_sigma >= 0.0) params.step_sigma = a.step_sigma;
        params.momentum = a.momentum;
        params.window = a.window;
        params.floor = a.floor;
        params.sample_interval = a.sample_interval;
        params.shared = a.shared;
        p = generate_smooth_walk(g, a.horizon, a.seed, params);
    } else {
        throw CLI::ValidationError("--kind", "expected blockages|fast_walk|smooth_walk");
    }
    save_profile(p, a.out);
    std::cout << "wrote " << a.out << " (kind=" << p.kind << " seed=" << p.seed
              << " horizon=" << p.horizon << " interval=" << p.sample_interval
              << " params=" << p.params_json << ")\n";
    return 0;
}

struct SimulateArgs {
    std::string graph;
    std::string profile;  // empty or "none" for static
    std::string strategy = "greedy_reactive";
    std::string method = "lazy";
    double phi = 0.0025;
    double noise_sigma = 0.0;
    std::uint64_t noise_seed = 0;
    int team_size = 1;
    double tick = 1.0;
    double duration = 2500.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string idleness_csv;
};

int cmd_simulate(const SimulateArgs& a) {
    const GraphSpec gspec = parse_graph_spec(a.graph);
    const PatrolGraph g = resolve_graph(gspec);
    std::optional<DynamicProfile> profile;
    if (!a.profile.empty() && a.profile != "none") {
        profile = load_profile(a.profile);
        validate_profile(*profile, g);
    }
    SimConfig cfg;
    cfg.graph_name = gspec.name;
    cfg.profile_name = profile ? a.profile : "none";
    cfg.strategy = a.strategy;
    cfg.method = handling_from_name(a.method);
    cfg.phi = a.phi;
    cfg.noise_sigma = a.noise_sigma;
    cfg.noise_seed = a.noise_seed;
    cfg.team_size = a.team_size;
    cfg.tick = a.tick;
    cfg.duration = a.duration;
    cfg.seed = a.seed;
    cfg.record_trace = !a.idleness_csv.empty();
    const RunRecord rec = run_simulation(cfg, g, profile ? &*profile : nullptr);
    if (!a.out.empty()) save_run_summary(rec, a.out);
    if (!a.idleness_csv.empty()) save_idleness_csv(rec, a.idleness_csv);
    std::cout << "mean_idleness=" << rec.mean_idleness
              << " max_idleness=" << rec.max_idleness << " visits=" << rec.visits
              << (a.out.empty() ? "" : " summary=" + a.out) << '\n';
    return 0;
}

int cmd_ingest(const std::string& graph, const std::string& csv,
               const std::string& out_profile, const std::string& out_graph) {
    const PatrolGraph g = resolve_graph(parse_graph_spec(graph));
    const IngestResult result = ingest_travel_times(g, load_travel_csv(csv));
    save_profile(result.profile, out_profile);
    if (!out_graph.empty()) save_graph(result.graph, out_graph);
    std::cout << "ingested " << csv << ": " << result.graph.arc_count() << " arcs, "
              << result.profile.series.front().size() << " samples per arc, horizon "
              << result.profile.horizon << "s"
              << (out_graph.empty() ? "" : ", min-weight graph -> " + out_graph) << '\n';
    return 0;
}

int cmd_experiment(const std::string& plan_path, int jobs, const std::string& out_dir,
                   std::optional<std::uint64_t> seed, std::optional<int> repeats,
                   std::optional<double> duration) {
    ExperimentPlan plan = load_plan(plan_path);
    if (seed) plan.seed = *seed;
    if (repeats) plan.repeats = *repeats;
    if (duration) plan.duration = *duration;
    const ExperimentResult result = run_experiment(plan, jobs, out_dir);
    std::cout << "experiment complete: " << result.executed << " executed, "
              << result.skipped << " skipped (already present)\n"
              << "manifest: " << result.manifest_path << '\n';
    return 0;
}

int cmd_analyze(const std::string& manifest, const std::string& reference_method,
                const std::string& out_dir) {
    const std::vector<RunEntry> entries = load_manifest_entries(manifest);
    write_analysis(entries, reference_method, out_dir);
    std::cout << "analyzed " << entries.size() << " runs -> " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic multi-agent patrol simulation on graphs with "
                 "time-varying edge traversability"};
    app.require_subcommand(1);

    GenerateProfileArgs gen;
    auto* sc_gen = app.add_subcommand("generate-profile",
                                      "Generate a dynamic edge-speed profile for a graph");
    sc_gen->add_option("--graph", gen.graph, "Graph JSON path or grid:RxC:W")->required();
    sc_gen->add_option("--kind", gen.kind, "blockages|fast_walk|smooth_walk")->required();
    sc_gen->add_option("--out", gen.out, "Output profile JSON path")->required();
    sc_gen->add_option("--horizon", gen.horizon, "Covered duration, seconds")
        ->check(CLI::PositiveNumber);
    sc_gen->add_option("--seed", gen.seed, "Generator seed");
    sc_gen->add_option("--sample-interval", gen.sample_interval, "Sample spacing, seconds")
        ->check(CLI::PositiveNumber);
    sc_gen->add_flag("--shared", gen.shared, "One realization shared by all edges");
    sc_gen->add_option("--block-scale", gen.block_scale, "Speed scale inside a blockage");
    sc_gen->add_option("--mean-block", gen.mean_block, "Mean blockage duration, seconds");
    sc_gen->add_option("--mean-gap", gen.mean_gap, "Mean gap duration, seconds");
    sc_gen->add_option("--step-sigma", gen.step_sigma, "Walk step standard deviation");
    sc_gen->add_option("--floor", gen.floor, "Minimum speed scale");
    sc_gen->add_option("--momentum", gen.momentum, "Smooth walk momentum");
    sc_gen->add_option("--window", gen.window, "Smooth walk rolling-mean window");

    std::string ing_graph, ing_csv, ing_out_profile, ing_out_graph;
    auto* sc_ing = app.add_subcommand(
        "ingest-traffic", "Build a profile from observed travel times "
                          "(CSV: t_seconds,from,to,travel_seconds)");
    sc_ing->add_option("--graph", ing_graph, "Graph JSON path or grid:RxC:W")->required();
    sc_ing->add_option("--csv", ing_csv, "Travel time CSV path")->required();
    sc_ing->add_option("--out-profile", ing_out_profile, "Output profile JSON")->required();
    sc_ing->add_option("--out-graph", ing_out_graph,
                       "Output graph JSON with base weights set to the smallest "
                       "observed times");

    SimulateArgs sim;
    auto* sc_sim = app.add_subcommand("simulate", "Run one simulation");
    sc_sim->add_option("--graph", sim.graph, "Graph JSON path or grid:RxC:W")->required();
    sc_sim->add_option("--profile", sim.profile, "Profile JSON path, or 'none'");
    sc_sim->add_option("--strategy", sim.strategy,
                       "greedy_reactive|expected_reactive|state_exchange");
    sc_sim->add_option("--method", sim.method, "lazy|simple|omniscient|decay");
    sc_sim->add_option("--phi", sim.phi, "Decay rate per second");
    sc_sim->add_option("--noise-sigma", sim.noise_sigma,
                       "Multiplicative belief noise standard deviation");
    sc_sim->add_option("--noise-seed", sim.noise_seed, "Noise draw seed");
    sc_sim->add_option("--team-size", sim.team_size, "Number of agents")
        ->check(CLI::PositiveNumber);
    sc_sim->add_option("--tick", sim.tick, "Tick length, seconds")
        ->check(CLI::PositiveNumber);
    sc_sim->add_option("--duration", sim.duration, "Run length, seconds")
        ->check(CLI::PositiveNumber);
    sc_sim->add_option("--seed", sim.seed, "Run seed (initial placement)");
    sc_sim->add_option("--out", sim.out, "Summary JSON path");
    sc_sim->add_option("--idleness-csv", sim.idleness_csv,
                       "Per-tick idleness CSV path (t,vertex,idleness)");

    std::string exp_plan, exp_out;
    int exp_jobs = 0;
    std::optional<std::uint64_t> exp_seed;
    std::optional<int> exp_repeats;
    std::optional<double> exp_duration;
    auto* sc_exp = app.add_subcommand("experiment", "Run a factorial experiment plan");
    sc_exp->add_option("--plan", exp_plan, "Plan JSON path")->required();
    sc_exp->add_option("--jobs", exp_jobs, "Parallel runs (default: cores)");
    sc_exp->add_option("--output-dir", exp_out, "Override the plan's output_dir");
    sc_exp->add_option("--seed", exp_seed, "Override the plan seed");
    sc_exp->add_option("--repeats", exp_repeats, "Override the plan repeats");
    sc_exp->add_option("--duration", exp_duration, "Override the plan duration");

    std::string ana_manifest, ana_ref = "lazy", ana_out = "analysis";
    auto* sc_ana = app.add_subcommand("analyze",
                                      "Emit relative-idleness tables and stats for a batch");
    sc_ana->add_option("--manifest", ana_manifest, "Experiment manifest path")->required();
    sc_ana->add_option("--reference-method", ana_ref, "Baseline method for ratios");
    sc_ana->add_option("--out-dir", ana_out, "Analysis output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_gen->parsed()) return cmd_generate_profile(gen);
        if (sc_ing->parsed()) {
            return cmd_ingest(ing_graph, ing_csv, ing_out_profile, ing_out_graph);
        }
        if (sc_sim->parsed()) return cmd_simulate(sim);
        if (sc_exp->parsed()) {
            return cmd_experiment(exp_plan, exp_jobs, exp_out, exp_seed, exp_repeats,
                                  exp_duration);
        }
        if (sc_ana->parsed()) return cmd_analyze(ana_manifest, ana_ref, ana_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
