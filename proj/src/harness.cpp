#include "patrol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "patrol/engine.hpp"
#include "patrol/rng.hpp"

namespace patrol {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out;
}

ordered_json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(what + ": " + e.what());
    }
}

ordered_json params_or_empty(const std::string& params_json) {
    if (params_json.empty()) return ordered_json::object();
    return parse_json_text(params_json, "profile params");
}

GraphSpec graph_spec_from_json(const ordered_json& j) {
    if (j.is_string()) return parse_graph_spec(j.get<std::string>());
    GraphSpec spec;
    if (j.contains("grid")) {
        const auto& gj = j.at("grid");
        spec.is_grid = true;
        spec.rows = gj.at("rows").get<int>();
        spec.cols = gj.at("cols").get<int>();
        spec.weight = gj.at("weight").get<double>();
        spec.name = "grid" + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                    "w" + format_num(spec.weight);
    } else if (j.contains("path")) {
        spec.path = j.at("path").get<std::string>();
        spec.name = fs::path(spec.path).stem().string();
    } else {
        throw std::runtime_error("plan: graph entry needs \"grid\" or \"path\"");
    }
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    spec.name = sanitize(spec.name);
    return spec;
}

ProfileSpec profile_spec_from_json(const ordered_json& j) {
    ProfileSpec spec;
    if (j.is_string()) {
        spec.kind = j.get<std::string>();
        spec.name = spec.kind;
    } else if (j.contains("path")) {
        spec.kind = "file";
        spec.path = j.at("path").get<std::string>();
        spec.name = fs::path(spec.path).stem().string();
    } else if (j.contains("kind")) {
        spec.kind = j.at("kind").get<std::string>();
        spec.name = spec.kind;
        if (j.contains("params")) spec.params_json = j.at("params").dump();
    } else {
        throw std::runtime_error("plan: profile entry needs \"kind\" or \"path\"");
    }
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    spec.name = sanitize(spec.name);
    if (spec.kind != "none" && spec.kind != "file" && spec.kind != "blockages" &&
        spec.kind != "fast_walk" && spec.kind != "smooth_walk") {
        throw std::runtime_error("plan: unknown profile kind '" + spec.kind + "'");
    }
    return spec;
}

std::string run_key(const PlannedRun& r) {
    std::ostringstream key;
    key << r.graph.name << "__" << r.profile.name << "__" << r.strategy << "__" << r.method
        << "__n" << r.team_size << "__r" << r.repeat;
    if (r.noise_sigma != 0.0) key << "__sigma" << format_num(r.noise_sigma);
    return sanitize(key.str());
}

SimConfig config_of(const ExperimentPlan& plan, const PlannedRun& run) {
    SimConfig cfg;
    cfg.graph_name = run.graph.name;
    cfg.profile_name = run.profile.name;
    cfg.strategy = run.strategy;
    cfg.method = handling_from_name(run.method);
    cfg.phi = plan.phi;
    cfg.noise_sigma = run.noise_sigma;
    cfg.noise_seed = run.noise_seed;
    cfg.team_size = run.team_size;
    cfg.tick = plan.tick;
    cfg.duration = plan.duration;
    cfg.seed = run.run_seed;
    return cfg;
}

void write_run_file(const fs::path& path, const PlannedRun& run, const RunRecord& rec) {
    ordered_json j;
    j["key"] = run.key;
    j["config"] = {
        {"graph", rec.config.graph_name},   {"profile", rec.config.profile_name},
        {"strategy", rec.config.strategy},  {"method", to_string(rec.config.method)},
        {"phi", rec.config.phi},            {"noise_sigma", rec.config.noise_sigma},
        {"noise_seed", rec.config.noise_seed}, {"team_size", rec.config.team_size},
        {"tick", rec.config.tick},          {"duration", rec.config.duration},
        {"seed", rec.config.seed},
    };
    j["repeat"] = run.repeat;
    j["profile_seed"] = run.profile_seed;
    j["initial_positions"] = rec.initial_positions;
    j["mean_idleness"] = rec.mean_idleness;
    j["max_idleness"] = rec.max_idleness;
    j["visits"] = rec.visits;
    j["observations"] = rec.observations.size();
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("experiment: cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

// A record counts as done if it parses and carries the planned seed.
bool run_file_is_valid(const fs::path& path, const PlannedRun& run) {
    std::ifstream in(path);
    if (!in) return false;
    try {
        ordered_json j;
        in >> j;
        return j.at("config").at("seed").get<std::uint64_t>() == run.run_seed &&
               j.contains("mean_idleness");
    } catch (const std::exception&) {
        return false;
    }
}

fs::path resolve_output_dir(const ExperimentPlan& plan, const std::string& override_dir) {
    fs::path dir = override_dir.empty() ? fs::path(plan.output_dir) : fs::path(override_dir);
    if (const char* root = std::getenv("PATROL_OUTPUT_ROOT"); root && dir.is_relative()) {
        dir = fs::path(root) / dir;
    }
    return dir;
}

std::string csv_cell(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string scenario_of(const RunEntry& e) {
    std::string s = e.graph + "/" + e.profile;
    if (e.noise_sigma != 0.0) s += "/sigma=" + format_num(e.noise_sigma);
    return s;
}

// Mean ratio over matched pairs passing the filter, or NaN when none do.
template <typename Filter>
double mean_ratio_where(const std::vector<MatchedRatio>& ratios, Filter&& keep) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const MatchedRatio& r : ratios) {
        if (keep(*r.test)) {
            sum += r.ratio;
            ++n;
        }
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN()
                  : sum / static_cast<double>(n);
}

}  // namespace

GraphSpec parse_graph_spec(const std::string& text) {
    GraphSpec spec;
    if (text.rfind("grid:", 0) == 0) {
        int rows = 0, cols = 0;
        double weight = 0.0;
        if (std::sscanf(text.c_str(), "grid:%dx%d:%lf", &rows, &cols, &weight) != 3) {
            throw std::runtime_error("graph spec: expected grid:ROWSxCOLS:WEIGHT, got " +
                                     text);
        }
        spec.is_grid = true;
        spec.rows = rows;
        spec.cols = cols;
        spec.weight = weight;
        spec.name = "grid" + std::to_string(rows) + "x" + std::to_string(cols) + "w" +
                    format_num(weight);
        return spec;
    }
    spec.path = text;
    spec.name = sanitize(fs::path(text).stem().string());
    return spec;
}

PatrolGraph resolve_graph(const GraphSpec& spec) {
    if (spec.is_grid) return generate_grid_graph(spec.rows, spec.cols, spec.weight);
    return load_graph(spec.path);
}

BlockageParams blockage_params_from_json(const std::string& params_json) {
    const ordered_json j = params_or_empty(params_json);
    BlockageParams p;
    p.block_scale = j.value("block_scale", p.block_scale);
    p.mean_block_duration = j.value("mean_block_duration", p.mean_block_duration);
    p.mean_gap_duration = j.value("mean_gap_duration", p.mean_gap_duration);
    p.sample_interval = j.value("sample_interval", p.sample_interval);
    p.shared = j.value("shared", p.shared);
    return p;
}

FastWalkParams fast_walk_params_from_json(const std::string& params_json) {
    const ordered_json j = params_or_empty(params_json);
    FastWalkParams p;
    p.step_sigma = j.value("step_sigma", p.step_sigma);
    p.floor = j.value("floor", p.floor);
    p.sample_interval = j.value("sample_interval", p.sample_interval);
    p.shared = j.value("shared", p.shared);
    return p;
}

SmoothWalkParams smooth_walk_params_from_json(const std::string& params_json) {
    const ordered_json j = params_or_empty(params_json);
    SmoothWalkParams p;
    p.step_sigma = j.value("step_sigma", p.step_sigma);
    p.momentum = j.value("momentum", p.momentum);
    p.window = j.value("window", p.window);
    p.floor = j.value("floor", p.floor);
    p.sample_interval = j.value("sample_interval", p.sample_interval);
    p.shared = j.value("shared", p.shared);
    return p;
}

std::optional<DynamicProfile> build_profile(const ProfileSpec& spec, const PatrolGraph& g,
                                            double horizon, std::uint64_t seed) {
    if (spec.kind == "none") return std::nullopt;
    if (spec.kind == "file") {
        DynamicProfile p = load_profile(spec.path);
        validate_profile(p, g);
        return p;
    }
    if (spec.kind == "blockages") {
        return generate_blockages(g, horizon, seed, blockage_params_from_json(spec.params_json));
    }
    if (spec.kind == "fast_walk") {
        return generate_fast_walk(g, horizon, seed, fast_walk_params_from_json(spec.params_json));
    }
    if (spec.kind == "smooth_walk") {
        return generate_smooth_walk(g, horizon, seed,
                                    smooth_walk_params_from_json(spec.params_json));
    }
    throw std::runtime_error("profile spec: unknown kind '" + spec.kind + "'");
}

ExperimentPlan plan_from_json_string(const std::string& text) {
    const ordered_json j = parse_json_text(text, "plan parse");
    ExperimentPlan plan;
    plan.seed = j.value("seed", plan.seed);
    plan.duration = j.value("duration", plan.duration);
    plan.tick = j.value("tick", plan.tick);
    plan.phi = j.value("phi", plan.phi);
    plan.repeats = j.value("repeats", plan.repeats);
    plan.output_dir = j.value("output_dir", plan.output_dir);
    for (const auto& gj : j.at("graphs")) plan.graphs.push_back(graph_spec_from_json(gj));
    for (const auto& pj : j.at("profiles")) {
        plan.profiles.push_back(profile_spec_from_json(pj));
    }
    plan.strategies = j.at("strategies").get<std::vector<std::string>>();
    plan.methods = j.at("methods").get<std::vector<std::string>>();
    plan.team_sizes = j.at("team_sizes").get<std::vector<int>>();
    if (j.contains("noise_sigmas")) {
        plan.noise_sigmas = j.at("noise_sigmas").get<std::vector<double>>();
    }

    if (plan.graphs.empty() || plan.profiles.empty() || plan.strategies.empty() ||
        plan.methods.empty() || plan.team_sizes.empty() || plan.noise_sigmas.empty()) {
        throw std::runtime_error("plan: graphs/profiles/strategies/methods/team_sizes "
                                 "must all be non-empty");
    }
    if (plan.repeats < 1) throw std::runtime_error("plan: repeats must be >= 1");
    for (const auto& s : plan.strategies) strategy_by_name(s);      // validate names
    for (const auto& m : plan.methods) handling_from_name(m);

    // Disambiguate repeated names so run keys stay unique.
    const auto dedupe = [](auto& specs) {
        std::map<std::string, int> seen;
        for (auto& s : specs) {
            const int n = ++seen[s.name];
            if (n > 1) s.name += "_" + std::to_string(n);
        }
    };
    dedupe(plan.graphs);
    dedupe(plan.profiles);
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("plan: cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return plan_from_json_string(buf.str());
}

std::vector<PlannedRun> expand_plan(const ExperimentPlan& plan) {
    std::vector<PlannedRun> runs;
    std::uint64_t graph_index = 0;
    for (const GraphSpec& graph : plan.graphs) {
        std::uint64_t profile_index = 0;
        for (const ProfileSpec& profile : plan.profiles) {
            for (int repeat = 0; repeat < plan.repeats; ++repeat) {
                const auto seed_of = [&](const char* salt, std::uint64_t scenario) {
                    return mix_seed(mix_seed(mix_seed(plan.seed, hash_str(salt)), scenario),
                                    static_cast<std::uint64_t>(repeat));
                };
                // Placement and noise seeds ignore the profile, so a run and
                // its static or other-profile reference share initial
                // positions and belief-noise draws.
                const std::uint64_t run_seed = seed_of("run", graph_index);
                const std::uint64_t noise_seed = seed_of("noise", graph_index);
                const std::uint64_t profile_seed =
                    seed_of("profile", graph_index * 8191 + profile_index);
                for (const std::string& strategy : plan.strategies) {
                    for (const std::string& method : plan.methods) {
                        for (int n : plan.team_sizes) {
                            for (double sigma : plan.noise_sigmas) {
                                PlannedRun r;
                                r.graph = graph;
                                r.profile = profile;
                                r.strategy = strategy;
                                r.method = method;
                                r.team_size = n;
                                r.repeat = repeat;
                                r.noise_sigma = sigma;
                                r.run_seed = run_seed;
                                r.profile_seed = profile_seed;
                                r.noise_seed = noise_seed;
                                r.key = run_key(r);
                                runs.push_back(std::move(r));
                            }
                        }
                    }
                }
            }
            ++profile_index;
        }
        ++graph_index;
    }
    return runs;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, int jobs,
                                const std::string& output_dir_override) {
    const std::vector<PlannedRun> runs = expand_plan(plan);
    const fs::path out_dir = resolve_output_dir(plan, output_dir_override);
    const fs::path runs_dir = out_dir / "runs";
    fs::create_directories(runs_dir);

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp<int>(jobs, 1, std::max<int>(1, static_cast<int>(runs.size())));

    std::atomic<std::size_t> next{0};
    std::atomic<int> executed{0}, skipped{0};
    std::mutex error_mutex;
    std::vector<std::string> errors;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            const PlannedRun& run = runs[i];
            try {
                const fs::path file = runs_dir / (run.key + ".json");
                if (run_file_is_valid(file, run)) {
                    ++skipped;
                    continue;
                }
                const PatrolGraph graph = resolve_graph(run.graph);
                const auto profile =
                    build_profile(run.profile, graph, plan.duration, run.profile_seed);
                const RunRecord rec = run_simulation(config_of(plan, run), graph,
                                                     profile ? &*profile : nullptr);
                write_run_file(file, run, rec);
                ++executed;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                errors.push_back(run.key + ": " + e.what());
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end());
        throw std::runtime_error("experiment: " + std::to_string(errors.size()) +
                                 " run(s) failed; first: " + errors.front());
    }

    ordered_json manifest;
    manifest["plan"] = {{"seed", plan.seed},       {"duration", plan.duration},
                        {"tick", plan.tick},       {"phi", plan.phi},
                        {"repeats", plan.repeats}, {"output_dir", out_dir.string()}};
    manifest["runs"] = ordered_json::array();
    for (const PlannedRun& run : runs) {
        manifest["runs"].push_back({{"key", run.key},
                                    {"file", "runs/" + run.key + ".json"},
                                    {"graph", run.graph.name},
                                    {"profile", run.profile.name},
                                    {"strategy", run.strategy},
                                    {"method", run.method},
                                    {"team_size", run.team_size},
                                    {"repeat", run.repeat},
                                    {"noise_sigma", run.noise_sigma},
                                    {"seed", run.run_seed}});
    }
    const fs::path manifest_path = out_dir / "manifest.json";
    std::ofstream out(manifest_path);
    if (!out) {
        throw std::runtime_error("experiment: cannot write " + manifest_path.string());
    }
    out << manifest.dump(2) << '\n';

    return {out_dir.string(), manifest_path.string(), executed.load(), skipped.load()};
}

std::vector<RunEntry> load_manifest_entries(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw std::runtime_error("manifest: cannot open " + manifest_path);
    }
    ordered_json manifest;
    try {
        in >> manifest;
    } catch (const std::exception& e) {
        throw std::runtime_error("manifest parse: " + std::string(e.what()));
    }
    const fs::path base = fs::path(manifest_path).parent_path();
    std::vector<RunEntry> entries;
    std::vector<std::string> missing;
    for (const auto& jr : manifest.at("runs")) {
        RunEntry e;
        e.graph = jr.at("graph").get<std::string>();
        e.profile = jr.at("profile").get<std::string>();
        e.strategy = jr.at("strategy").get<std::string>();
        e.method = jr.at("method").get<std::string>();
        e.team_size = jr.at("team_size").get<int>();
        e.repeat = jr.at("repeat").get<int>();
        e.noise_sigma = jr.value("noise_sigma", 0.0);
        e.seed = jr.at("seed").get<std::uint64_t>();
        const fs::path file = base / jr.at("file").get<std::string>();
        std::ifstream rf(file);
        if (!rf) {
            missing.push_back(jr.at("key").get<std::string>());
            continue;
        }
        ordered_json run;
        try {
            rf >> run;
            e.mean_idleness = run.at("mean_idleness").get<double>();
            e.max_idleness = run.at("max_idleness").get<double>();
        } catch (const std::exception&) {
            missing.push_back(jr.at("key").get<std::string>());
            continue;
        }
        entries.push_back(std::move(e));
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "manifest: " << missing.size() << " record(s) missing or unreadable:";
        for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 8); ++i) {
            msg << ' ' << missing[i] << ';';
        }
        throw std::runtime_error(msg.str());
    }
    return entries;
}

void write_analysis(const std::vector<RunEntry>& entries,
                    const std::string& reference_method, const std::string& out_dir) {
    if (entries.empty()) {
        throw std::runtime_error("analysis: no entries");
    }
    handling_from_name(reference_method);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::set<std::string> methods, strategies, profiles;
    std::set<int> team_sizes;
    std::set<double> sigmas;
    for (const RunEntry& e : entries) {
        methods.insert(e.method);
        strategies.insert(e.strategy);
        profiles.insert(e.profile);
        team_sizes.insert(e.team_size);
        sigmas.insert(e.noise_sigma);
    }
    if (!methods.count(reference_method)) {
        throw std::runtime_error("analysis: reference method '" + reference_method +
                                 "' has no runs in the manifest");
    }

    std::vector<RunEntry> ref_entries;
    for (const RunEntry& e : entries) {
        if (e.method == reference_method) ref_entries.push_back(e);
    }
    const std::vector<MatchedRatio> ratios =
        relative_idleness(entries, ref_entries, CompareAxis::method);

    const bool has_static = profiles.count("none") > 0;
    const bool has_dynamic = profiles.size() > (has_static ? 1u : 0u);
    const auto is_dynamic = [](const RunEntry& e) { return e.profile != "none"; };

    {  // long.csv
        std::ofstream out(dir / "long.csv");
        out << "scenario,method,strategy,n,seed,mean_idleness\n";
        char buf[64];
        for (const RunEntry& e : entries) {
            std::snprintf(buf, sizeof(buf), "%.17g", e.mean_idleness);
            out << scenario_of(e) << ',' << e.method << ',' << e.strategy << ','
                << e.team_size << ',' << e.seed << ',' << buf << '\n';
        }
    }

    {  // table_by_profile.csv: rows = profile, cols = strategy x method
        std::ofstream out(dir / "table_by_profile.csv");
        out << "profile";
        for (const auto& s : strategies) {
            for (const auto& m : methods) out << ',' << s << '/' << m;
        }
        out << '\n';
        for (const auto& p : profiles) {
            out << p;
            for (const auto& s : strategies) {
                for (const auto& m : methods) {
                    const double v = mean_ratio_where(ratios, [&](const RunEntry& e) {
                        return e.profile == p && e.strategy == s && e.method == m;
                    });
                    out << ',' << csv_cell(v);
                }
            }
            out << '\n';
        }
    }

    {  // table_by_team_size.csv, aggregated over dynamic profiles when present
        std::ofstream out(dir / "table_by_team_size.csv");
        out << "n";
        for (const auto& s : strategies) {
            for (const auto& m : methods) out << ',' << s << '/' << m;
        }
        out << '\n';
        for (int n : team_sizes) {
            out << n;
            for (const auto& s : strategies) {
                for (const auto& m : methods) {
                    const double v = mean_ratio_where(ratios, [&](const RunEntry& e) {
                        return e.team_size == n && e.strategy == s && e.method == m &&
                               (!has_dynamic || is_dynamic(e));
                    });
                    out << ',' << csv_cell(v);
                }
            }
            out << '\n';
        }
    }

    if (has_static && has_dynamic) {
        // Reference method under dynamics vs the static environment.
        std::vector<RunEntry> dynamic_ref, static_ref;
        for (const RunEntry& e : ref_entries) {
            (is_dynamic(e) ? dynamic_ref : static_ref).push_back(e);
        }
        const auto impact =
            relative_idleness(dynamic_ref, static_ref, CompareAxis::profile);
        std::ofstream out(dir / "table_dynamics_impact.csv");
        out << "n";
        for (const auto& s : strategies) {
            for (const auto& p : profiles) {
                if (p != "none") out << ',' << s << '/' << p;
            }
        }
        out << '\n';
        for (int n : team_sizes) {
            out << n;
            for (const auto& s : strategies) {
                for (const auto& p : profiles) {
                    if (p == "none") continue;
                    const double v = mean_ratio_where(impact, [&](const RunEntry& e) {
                        return e.team_size == n && e.strategy == s && e.profile == p;
                    });
                    out << ',' << csv_cell(v);
                }
            }
            out << '\n';
        }
    }

    if (sigmas.size() > 1) {
        std::vector<RunEntry> noise_free;
        for (const RunEntry& e : entries) {
            if (e.noise_sigma == 0.0) noise_free.push_back(e);
        }
        const auto noise_ratios =
            relative_idleness(entries, noise_free, CompareAxis::noise);
        std::ofstream out(dir / "table_noise.csv");
        out << "sigma";
        for (const auto& s : strategies) out << ',' << s;
        out << '\n';
        for (double sigma : sigmas) {
            out << format_num(sigma);
            for (const auto& s : strategies) {
                const double v = mean_ratio_where(noise_ratios, [&](const RunEntry& e) {
                    return e.noise_sigma == sigma && e.strategy == s;
                });
                out << ',' << csv_cell(v);
            }
            out << '\n';
        }
    }

    ordered_json stats;
    stats["reference_method"] = reference_method;
    stats["aggregate_relative_idleness"] = ordered_json::object();
    stats["aggregate_relative_idleness_by_profile"] = ordered_json::object();
    for (const auto& m : methods) {
        stats["aggregate_relative_idleness"][m] =
            mean_ratio_where(ratios, [&](const RunEntry& e) {
                return e.method == m && (!has_dynamic || is_dynamic(e));
            });
        ordered_json per_profile;
        for (const auto& p : profiles) {
            per_profile[p] = mean_ratio_where(ratios, [&](const RunEntry& e) {
                return e.method == m && e.profile == p;
            });
        }
        stats["aggregate_relative_idleness_by_profile"][m] = std::move(per_profile);
    }

    stats["wilcoxon"] = ordered_json::array();
    const auto pair_key = [](const RunEntry& e) {
        std::ostringstream k;
        k << e.graph << '|' << e.profile << '|' << e.strategy << '|' << e.team_size << '|'
          << e.repeat << '|' << e.noise_sigma;
        return k.str();
    };
    const std::vector<std::string> method_list(methods.begin(), methods.end());
    for (std::size_t a = 0; a < method_list.size(); ++a) {
        for (std::size_t b = a + 1; b < method_list.size(); ++b) {
            std::map<std::string, double> ma, mb;
            for (const RunEntry& e : entries) {
                if (e.method == method_list[a]) ma[pair_key(e)] = e.mean_idleness;
                if (e.method == method_list[b]) mb[pair_key(e)] = e.mean_idleness;
            }
            std::vector<std::pair<double, double>> pairs;
            for (const auto& [k, va] : ma) {
                const auto it = mb.find(k);
                if (it != mb.end()) pairs.emplace_back(va, it->second);
            }
            ordered_json entry{{"method_a", method_list[a]},
                               {"method_b", method_list[b]},
                               {"n_pairs", pairs.size()}};
            try {
                const WilcoxonResult w = wilcoxon_signed_rank(pairs);
                entry["w_statistic"] = w.statistic;
                entry["p_two_sided"] = w.p_two_sided;
                entry["n_nonzero"] = w.n_nonzero;
                entry["exact"] = w.exact;
            } catch (const std::exception& e) {
                entry["note"] = e.what();
            }
            stats["wilcoxon"].push_back(std::move(entry));
        }
    }

    std::ofstream out(dir / "stats.json");
    if (!out) {
        throw std::runtime_error("analysis: cannot write stats.json");
    }
    out << stats.dump(2) << '\n';
}

}  // namespace patrol
