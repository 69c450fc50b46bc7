#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patrol/belief.hpp"
#include "patrol/dynamics.hpp"
#include "patrol/graph.hpp"
#include "patrol/strategy.hpp"

namespace patrol {

struct SimConfig {
    std::string graph_name;    // echoed into summaries, not interpreted
    std::string profile_name;  // "" or "none" for a static environment
    std::string strategy = "greedy_reactive";
    Handling method = Handling::lazy;
    double phi = 0.0025;
    double noise_sigma = 0.0;
    std::uint64_t noise_seed = 0;
    int team_size = 1;
    double tick = 1.0;       // seconds
    double duration = 2500.0;  // seconds, multiple of tick
    std::uint64_t seed = 0;  // initial placement
    bool record_trace = false;  // keep per-tick per-vertex idleness
};

struct ObservationEvent {
    double t = 0.0;  // arrival time
    EdgeId arc = 0;
    double observed_weight = 0.0;
    int agent = 0;
};

struct RunRecord {
    SimConfig config;
    std::int32_t num_vertices = 0;
    std::vector<VertexId> initial_positions;
    double mean_idleness = 0.0;  // time-and-vertex average at tick resolution
    double max_idleness = 0.0;
    std::int64_t visits = 0;
    std::vector<ObservationEvent> observations;
    // Sum of idleness over vertices at each tick end, always recorded.
    std::vector<double> tick_idleness_sum;
    // [tick][vertex], only when config.record_trace is set.
    std::vector<std::vector<double>> idleness_trace;
};

// Runs one simulation. Single-threaded and fully determined by the config:
// per tick, on-edge agents advance by tick * speed_scale / base_weight; an
// agent reaching its target resets that vertex's idleness, broadcasts the
// observed traversal time (shared beliefs) and its next intention with zero
// latency, and immediately starts the next traversal. Simultaneous arrivals
// are processed in agent-id order.
RunRecord run_simulation(const SimConfig& cfg, const PatrolGraph& g,
                         const DynamicProfile* profile);

// Exact traversal completion time over the piecewise-constant profile: the
// smallest d such that the scale integral over [t_start, t_start+d] covers
// base_weight. Independent of the tick loop; used to cross-check it.
double integrated_traversal_time(const DynamicProfile& p, EdgeId arc, double t_start,
                                 double base_weight);

void save_run_summary(const RunRecord& rec, const std::string& path);
// Long-format per-tick idleness: t,vertex,idleness. Requires record_trace.
void save_idleness_csv(const RunRecord& rec, const std::string& path);

}  // namespace patrol
