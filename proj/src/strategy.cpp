#include "patrol/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace patrol {
namespace {

// Argmax with the shared tie-break chain: higher score, then smaller
// believed weight, then smaller vertex id.
template <typename Score>
VertexId pick_best(const DecisionContext& ctx, Score&& score) {
    if (ctx.neighbors.empty()) {
        throw std::runtime_error("strategy: decision context has no neighbors");
    }
    const NeighborArc* best = nullptr;
    double best_score = 0.0;
    for (const NeighborArc& n : ctx.neighbors) {
        const double s = score(n);
        if (best == nullptr || s > best_score ||
            (s == best_score && (n.believed_weight < best->believed_weight ||
                                 (n.believed_weight == best->believed_weight &&
                                  n.to < best->to)))) {
            best = &n;
            best_score = s;
        }
    }
    return best->to;
}

double idleness_of(const DecisionContext& ctx, VertexId v) {
    return ctx.idleness[static_cast<std::size_t>(v)];
}

std::int32_t intentions_on(const DecisionContext& ctx, VertexId v) {
    return ctx.intentions[static_cast<std::size_t>(v)];
}

}  // namespace

VertexId decide_greedy_reactive(const DecisionContext& ctx) {
    return pick_best(ctx, [&](const NeighborArc& n) { return idleness_of(ctx, n.to); });
}

VertexId decide_expected_reactive(const DecisionContext& ctx) {
    return pick_best(ctx, [&](const NeighborArc& n) {
        const double w = n.believed_weight;
        const double arrival_idleness =
            intentions_on(ctx, n.to) == 0 ? idleness_of(ctx, n.to) + w : w;
        return arrival_idleness / w;
    });
}

VertexId decide_state_exchange(const DecisionContext& ctx) {
    return pick_best(ctx, [&](const NeighborArc& n) {
        return idleness_of(ctx, n.to) / n.believed_weight *
               std::exp2(static_cast<double>(-intentions_on(ctx, n.to)));
    });
}

StrategyFn strategy_by_name(const std::string& name) {
    if (name == "greedy_reactive") return &decide_greedy_reactive;
    if (name == "expected_reactive") return &decide_expected_reactive;
    if (name == "state_exchange") return &decide_state_exchange;
    throw std::runtime_error(
        "unknown strategy '" + name +
        "' (expected greedy_reactive|expected_reactive|state_exchange)");
}

const std::vector<std::string>& strategy_names() {
    static const std::vector<std::string> names{"greedy_reactive", "expected_reactive",
                                                "state_exchange"};
    return names;
}

}  // namespace patrol
