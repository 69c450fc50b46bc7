#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patrol/dynamics.hpp"
#include "patrol/graph.hpp"

namespace patrol {

// How a team maintains its shared edge-weight beliefs.
//   lazy       - prior weights, never updated
//   simple     - last observed traversal time per edge
//   omniscient - true effective weight at read time
//   decay      - last observation relaxed toward the team mean over time
enum class Handling { lazy, simple, omniscient, decay };

Handling handling_from_name(const std::string& name);
std::string to_string(Handling method);

// Multiplicative belief error: each arc's read is scaled once per run by a
// draw from N(1, sigma^2) clamped to >= 0.05, modelling a team acting on
// consistently wrong information.
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

// One team's edge-weight beliefs. Mutated only by the engine's
// single-threaded loop; reads are pure functions of (state, t_now).
class BeliefState {
public:
    static BeliefState init(const PatrolGraph& g, Handling method, double phi = 0.0025,
                            const NoiseSpec& noise = {});

    // Records an observed traversal time. No-op for lazy and omniscient,
    // which either ignore observations or already know the truth.
    void record_observation(EdgeId arc, double observed_weight, double t_now);

    // Current believed weight of an arc.
    //   lazy/simple: the anchor (times the noise multiplier, if any).
    //   omniscient:  base_weight / speed_scale(truth, arc, t_now); with no
    //                profile the environment is static, so the base weight.
    //   decay:       mean + (1-phi)^(t_now - anchor_time) * (anchor - mean),
    //                evaluated lazily; anchors are not mutated on read.
    double believed_weight(EdgeId arc, double t_now,
                           const DynamicProfile* truth = nullptr) const;

    Handling method() const { return method_; }
    double phi() const { return phi_; }
    // Arithmetic mean of the current (noise-adjusted) anchors.
    double collective_mean() const { return mean_sum_ / static_cast<double>(anchor_value_.size()); }
    double anchor_value(EdgeId arc) const { return anchor_value_[static_cast<std::size_t>(arc)]; }
    double anchor_time(EdgeId arc) const { return anchor_time_[static_cast<std::size_t>(arc)]; }
    double noise_multiplier(EdgeId arc) const {
        return noise_mult_.empty() ? 1.0 : noise_mult_[static_cast<std::size_t>(arc)];
    }

private:
    BeliefState() = default;

    double effective_anchor(std::size_t arc) const {
        return noise_mult_.empty() ? anchor_value_[arc] : anchor_value_[arc] * noise_mult_[arc];
    }

    Handling method_ = Handling::lazy;
    double phi_ = 0.0025;
    std::vector<double> anchor_value_;  // last recorded weight per arc
    std::vector<double> anchor_time_;   // when it was recorded
    std::vector<double> base_weight_;   // truth reference for omniscient reads
    std::vector<double> noise_mult_;    // empty when sigma == 0
    double mean_sum_ = 0.0;             // running sum of effective anchors
};

}  // namespace patrol
