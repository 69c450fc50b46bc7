#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "patrol/engine.hpp"

namespace patrol {

// Mean graph idleness from a run's per-tick samples:
// tick / (duration * |V|) * sum over ticks and vertices. Throws if the
// record does not carry one sample per tick.
double mean_graph_idleness(const RunRecord& rec);
double max_graph_idleness(const RunRecord& rec);

// One summarized run as used by batch analysis.
struct RunEntry {
    std::string graph;
    std::string profile;  // "none" for static runs
    std::string strategy;
    std::string method;
    int team_size = 1;
    int repeat = 0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    double mean_idleness = 0.0;
    double max_idleness = 0.0;
};

// Which field the reference set differs in; all other fields must match.
enum class CompareAxis { method, profile, noise };

struct MatchedRatio {
    const RunEntry* test = nullptr;
    const RunEntry* reference = nullptr;
    double ratio = 0.0;  // test mean idleness / reference mean idleness
};

// Pairs every test entry with the reference entry matching on everything but
// the compared axis. Throws listing the missing pairs if any test entry has
// no reference; matched runs must agree on seed.
std::vector<MatchedRatio> relative_idleness(std::span<const RunEntry> tests,
                                            std::span<const RunEntry> references,
                                            CompareAxis axis);

// Unweighted mean over matched pairs.
double mean_ratio(std::span<const MatchedRatio> ratios);

struct WilcoxonResult {
    double statistic = 0.0;  // W = min(W+, W-)
    double p_two_sided = 1.0;
    int n_nonzero = 0;
    bool exact = false;  // enumeration (n <= 12) vs normal approximation
};

// Wilcoxon signed-rank test on paired samples: zero differences dropped,
// average ranks for tied magnitudes, exact two-sided p by enumerating sign
// assignments up to 12 nonzero differences, normal approximation with
// continuity and tie corrections above that. Requires >= 5 nonzero
// differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

}  // namespace patrol
