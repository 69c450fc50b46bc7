#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patrol/graph.hpp"

namespace patrol {

// Per-edge time series of speed-scale factors defining ground-truth
// traversability. Lookup is piecewise-constant: the sample at
// floor(t / sample_interval) is held until the next one. Immutable after
// generation; shared read-only across runs.
struct DynamicProfile {
    std::string kind;         // constant | blockages | fast_walk | smooth_walk | traffic
    std::string params_json;  // generator parameter echo
    std::uint64_t seed = 0;
    double sample_interval = 0.0;  // seconds
    double horizon = 0.0;          // seconds
    std::vector<std::int32_t> arc_series;      // arc -> series slot
    std::vector<std::vector<double>> series;   // per-slot samples, all > 0
};

// Held sample at time t. Throws if t < 0 or t > horizon: runs must not
// silently extrapolate past the covered window.
double speed_scale(const DynamicProfile& p, EdgeId arc, double t);

// Checks the profile against a graph: arc mapping size, slot ranges,
// positive finite samples, and coverage of [0, horizon].
void validate_profile(const DynamicProfile& p, const PatrolGraph& g);

struct BlockageParams {
    double block_scale = 0.1;
    double mean_block_duration = 500.0;  // seconds, exponential
    double mean_gap_duration = 2000.0;   // seconds, exponential
    double sample_interval = 10.0;
    bool shared = false;  // one realization applied to every edge
};

struct FastWalkParams {
    double step_sigma = 0.4;  // decorrelates within roughly one traversal
    double floor = 0.05;
    double sample_interval = 10.0;
    bool shared = false;
};

struct SmoothWalkParams {
    double step_sigma = 0.01;
    double momentum = 0.5;
    int window = 20;  // centered rolling mean, samples
    double floor = 0.05;
    double sample_interval = 10.0;
    bool shared = false;
};

// Alternating renewal process per edge: scale 1.0 during gaps, block_scale
// during blocks, with exponentially distributed durations.
DynamicProfile generate_blockages(const PatrolGraph& g, double horizon, std::uint64_t seed,
                                  const BlockageParams& params = {});

// Noisy random walk from 1.0, clamped to [floor, 1], one step per sample.
DynamicProfile generate_fast_walk(const PatrolGraph& g, double horizon, std::uint64_t seed,
                                  const FastWalkParams& params = {});

// Random walk with momentum, centered rolling mean, clamped to >= floor.
// The only generator whose output can exceed 1.
DynamicProfile generate_smooth_walk(const PatrolGraph& g, double horizon, std::uint64_t seed,
                                    const SmoothWalkParams& params = {});

struct TravelTimeRow {
    double t = 0.0;  // seconds since scenario start
    VertexId from = 0;
    VertexId to = 0;
    double travel_seconds = 0.0;
};

struct IngestResult {
    PatrolGraph graph;       // directed, base weights = smallest observed times
    DynamicProfile profile;  // scale(e,t) = base(e) / travel_time(e,t)
};

// Builds a profile from observed travel times on a uniform time grid
// starting at 0. Every directed arc must have a row at every grid time.
// The returned graph's base weights are the per-arc minima, so the profile
// is the slowdown relative to the best observed conditions.
IngestResult ingest_travel_times(const PatrolGraph& g, const std::vector<TravelTimeRow>& rows);

// Implied travel times base(e)/scale(e,t) over the sample grid. Re-ingesting
// the result reproduces the profile exactly when every arc's peak scale is 1
// (true for ingested, blockage, and fast-walk profiles).
std::vector<TravelTimeRow> export_travel_times(const PatrolGraph& g, const DynamicProfile& p);

// Mean pairwise Pearson correlation over series slots. Pairs involving a
// constant series contribute 0 by convention; bitwise-identical series
// contribute exactly 1.
double edge_correlation(const DynamicProfile& p);

DynamicProfile load_profile(const std::string& path);
void save_profile(const DynamicProfile& p, const std::string& path);

std::vector<TravelTimeRow> load_travel_csv(const std::string& path);
void save_travel_csv(const std::vector<TravelTimeRow>& rows, const std::string& path);

}  // namespace patrol
