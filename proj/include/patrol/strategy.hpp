#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patrol/graph.hpp"

namespace patrol {

struct NeighborArc {
    EdgeId arc = 0;
    VertexId to = 0;
    double believed_weight = 0.0;  // > 0
};

// Everything a strategy sees when an agent picks its next vertex: the
// neighbor arcs with current believed weights, per-vertex idleness, and how
// many other agents have announced each vertex as their target.
struct DecisionContext {
    VertexId current_vertex = 0;
    std::vector<NeighborArc> neighbors;         // non-empty
    std::span<const double> idleness;           // per vertex, seconds
    std::span<const std::int32_t> intentions;   // per vertex, other agents only
    double t_now = 0.0;
    int agent_id = 0;
};

// All strategies are pure functions of the context and break score ties by
// smaller believed weight, then smaller vertex id, so identical contexts
// give identical choices regardless of neighbor ordering.

// Highest idleness wins.
VertexId decide_greedy_reactive(const DecisionContext& ctx);

// Idleness-at-arrival rate: score = I_arr(v) / w(v), where I_arr is
// idleness(v) + w(v) unless another agent already targets v, in which case
// only the travel time counts.
VertexId decide_expected_reactive(const DecisionContext& ctx);

// Idleness gain rate discounted by announced competition:
// score = idleness(v) / w(v) * 2^-intentions(v).
VertexId decide_state_exchange(const DecisionContext& ctx);

using StrategyFn = VertexId (*)(const DecisionContext&);

// Lookup by config name; throws on unknown names.
StrategyFn strategy_by_name(const std::string& name);
const std::vector<std::string>& strategy_names();

}  // namespace patrol
