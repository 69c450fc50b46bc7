#include "patrol/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "patrol/rng.hpp"

namespace patrol {
namespace {

using ordered_json = nlohmann::ordered_json;

struct Agent {
    int id = 0;
    VertexId intention = 0;       // announced target, cleared on arrival
    EdgeId arc = 0;               // arc currently being traversed
    double traversal_start = 0.0;
    double remaining_work = 0.0;  // seconds of base weight left at unit scale
};

// Absorbs accumulated rounding in the per-tick work sums, so a traversal
// whose scale integral lands exactly on a tick boundary arrives there.
constexpr double kArrivalSlack = 1e-9;

// Distinct start vertices, uniform via partial Fisher-Yates.
std::vector<VertexId> sample_positions(std::int32_t num_vertices, int team_size,
                                       std::uint64_t seed) {
    std::vector<VertexId> ids(static_cast<std::size_t>(num_vertices));
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng(mix_seed(seed, hash_str("placement")));
    for (int i = 0; i < team_size; ++i) {
        const auto j = i + static_cast<std::int64_t>(rng.next_below(
                               static_cast<std::uint64_t>(num_vertices - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ids.resize(static_cast<std::size_t>(team_size));
    return ids;
}

void validate_config(const SimConfig& cfg, const PatrolGraph& g,
                     const DynamicProfile* profile) {
    if (cfg.team_size < 1) {
        throw std::runtime_error("sim: team_size must be >= 1");
    }
    if (cfg.team_size > g.vertex_count()) {
        throw std::runtime_error("sim: team_size " + std::to_string(cfg.team_size) +
                                 " exceeds vertex count " +
                                 std::to_string(g.vertex_count()));
    }
    if (!(cfg.tick > 0.0)) {
        throw std::runtime_error("sim: tick must be > 0");
    }
    const double ticks = cfg.duration / cfg.tick;
    if (!(cfg.duration > 0.0) ||
        std::abs(ticks - std::round(ticks)) > 1e-9 * std::max(1.0, ticks)) {
        throw std::runtime_error("sim: duration must be a positive multiple of tick");
    }
    if (profile) {
        validate_profile(*profile, g);
        if (profile->horizon < cfg.duration) {
            throw std::runtime_error("sim: profile horizon " +
                                     std::to_string(profile->horizon) +
                                     " shorter than duration " +
                                     std::to_string(cfg.duration));
        }
    }
}

}  // namespace

RunRecord run_simulation(const SimConfig& cfg, const PatrolGraph& g,
                         const DynamicProfile* profile) {
    validate_config(cfg, g, profile);
    const StrategyFn strategy = strategy_by_name(cfg.strategy);
    const auto num_vertices = static_cast<std::size_t>(g.vertex_count());
    const auto num_ticks = static_cast<std::size_t>(std::llround(cfg.duration / cfg.tick));

    RunRecord rec;
    rec.config = cfg;
    rec.num_vertices = g.vertex_count();
    rec.initial_positions = sample_positions(g.vertex_count(), cfg.team_size, cfg.seed);
    rec.tick_idleness_sum.reserve(num_ticks);
    if (cfg.record_trace) rec.idleness_trace.reserve(num_ticks);

    BeliefState beliefs =
        BeliefState::init(g, cfg.method, cfg.phi, {cfg.noise_sigma, cfg.noise_seed});

    std::vector<double> last_visit(num_vertices, 0.0);
    std::vector<std::int32_t> intention_count(num_vertices, 0);
    std::vector<double> idleness(num_vertices, 0.0);

    const auto decide_and_depart = [&](Agent& agent, VertexId at, double t_now) {
        DecisionContext ctx;
        ctx.current_vertex = at;
        ctx.t_now = t_now;
        ctx.agent_id = agent.id;
        for (std::size_t v = 0; v < num_vertices; ++v) {
            idleness[v] = t_now - last_visit[v];
        }
        ctx.idleness = idleness;
        ctx.intentions = intention_count;
        const auto& out = g.out_arcs(at);
        ctx.neighbors.reserve(out.size());
        for (EdgeId e : out) {
            ctx.neighbors.push_back(
                {e, g.arc(e).to, beliefs.believed_weight(e, t_now, profile)});
        }
        const VertexId target = strategy(ctx);
        agent.arc = g.arc_between(at, target);  // throws if the choice is not a neighbor
        agent.intention = target;
        agent.traversal_start = t_now;
        agent.remaining_work = g.arc(agent.arc).base_weight;
        ++intention_count[static_cast<std::size_t>(target)];
    };

    std::vector<Agent> agents(static_cast<std::size_t>(cfg.team_size));
    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].id = static_cast<int>(i);
        decide_and_depart(agents[i], rec.initial_positions[i], 0.0);
    }

    for (std::size_t k = 0; k < num_ticks; ++k) {
        const double t = static_cast<double>(k) * cfg.tick;
        const double t_end = static_cast<double>(k + 1) * cfg.tick;

        for (Agent& agent : agents) {
            const double scale = profile ? speed_scale(*profile, agent.arc, t) : 1.0;
            agent.remaining_work -= cfg.tick * scale;
        }

        // Arrivals in agent-id order; observations and fresh intentions are
        // visible to later deciders within the same tick.
        for (Agent& agent : agents) {
            if (agent.remaining_work > kArrivalSlack) continue;
            const VertexId at = g.arc(agent.arc).to;
            last_visit[static_cast<std::size_t>(at)] = t_end;
            ++rec.visits;
            --intention_count[static_cast<std::size_t>(at)];
            const double observed = t_end - agent.traversal_start;
            rec.observations.push_back({t_end, agent.arc, observed, agent.id});
            beliefs.record_observation(agent.arc, observed, t_end);
            decide_and_depart(agent, at, t_end);
        }

        double sum = 0.0;
        double tick_max = 0.0;
        for (std::size_t v = 0; v < num_vertices; ++v) {
            idleness[v] = t_end - last_visit[v];
            sum += idleness[v];
            tick_max = std::max(tick_max, idleness[v]);
        }
        rec.tick_idleness_sum.push_back(sum);
        rec.max_idleness = std::max(rec.max_idleness, tick_max);
        if (cfg.record_trace) rec.idleness_trace.push_back(idleness);
    }

    const double total =
        std::accumulate(rec.tick_idleness_sum.begin(), rec.tick_idleness_sum.end(), 0.0);
    rec.mean_idleness =
        total * cfg.tick / (cfg.duration * static_cast<double>(num_vertices));
    return rec;
}

double integrated_traversal_time(const DynamicProfile& p, EdgeId arc, double t_start,
                                 double base_weight) {
    if (t_start < 0.0 || t_start > p.horizon) {
        throw std::runtime_error("traversal oracle: t_start outside profile window");
    }
    if (!(base_weight > 0.0)) {
        throw std::runtime_error("traversal oracle: base_weight must be > 0");
    }
    const auto& s = p.series[static_cast<std::size_t>(
        p.arc_series[static_cast<std::size_t>(arc)])];
    const double interval = p.sample_interval;
    double work = base_weight;  // seconds of unit-scale traversal left
    double t = t_start;
    auto idx = static_cast<std::size_t>(std::floor(t / interval));
    while (true) {
        const double scale = s[std::min(idx, s.size() - 1)];
        const double segment_end =
            std::min(static_cast<double>(idx + 1) * interval, p.horizon);
        const double span = segment_end - t;
        const double capacity = span * scale;
        if (capacity >= work) {
            return t + work / scale - t_start;
        }
        if (segment_end >= p.horizon) {
            throw std::runtime_error(
                "traversal oracle: traversal does not complete within horizon");
        }
        work -= capacity;
        t = segment_end;
        ++idx;
    }
}

void save_run_summary(const RunRecord& rec, const std::string& path) {
    ordered_json j;
    j["config"] = {
        {"graph", rec.config.graph_name},
        {"profile", rec.config.profile_name.empty() ? "none" : rec.config.profile_name},
        {"strategy", rec.config.strategy},
        {"method", to_string(rec.config.method)},
        {"phi", rec.config.phi},
        {"noise_sigma", rec.config.noise_sigma},
        {"noise_seed", rec.config.noise_seed},
        {"team_size", rec.config.team_size},
        {"tick", rec.config.tick},
        {"duration", rec.config.duration},
        {"seed", rec.config.seed},
    };
    j["num_vertices"] = rec.num_vertices;
    j["initial_positions"] = rec.initial_positions;
    j["mean_idleness"] = rec.mean_idleness;
    j["max_idleness"] = rec.max_idleness;
    j["visits"] = rec.visits;
    j["observations"] = rec.observations.size();
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("run summary: cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

void save_idleness_csv(const RunRecord& rec, const std::string& path) {
    if (rec.idleness_trace.empty()) {
        throw std::runtime_error("idleness csv: run was not recorded with record_trace");
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("idleness csv: cannot write " + path);
    }
    out << "t,vertex,idleness\n";
    char buf[96];
    for (std::size_t k = 0; k < rec.idleness_trace.size(); ++k) {
        const double t = static_cast<double>(k + 1) * rec.config.tick;
        for (std::size_t v = 0; v < rec.idleness_trace[k].size(); ++v) {
            std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g\n", t, v,
                          rec.idleness_trace[k][v]);
            out << buf;
        }
    }
}

}  // namespace patrol
