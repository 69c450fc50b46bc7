#include "patrol/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "patrol/rng.hpp"

namespace patrol {

Handling handling_from_name(const std::string& name) {
    if (name == "lazy") return Handling::lazy;
    if (name == "simple") return Handling::simple;
    if (name == "omniscient") return Handling::omniscient;
    if (name == "decay") return Handling::decay;
    throw std::runtime_error("unknown handling method '" + name +
                             "' (expected lazy|simple|omniscient|decay)");
}

std::string to_string(Handling method) {
    switch (method) {
        case Handling::lazy: return "lazy";
        case Handling::simple: return "simple";
        case Handling::omniscient: return "omniscient";
        case Handling::decay: return "decay";
    }
    return "?";
}

BeliefState BeliefState::init(const PatrolGraph& g, Handling method, double phi,
                              const NoiseSpec& noise) {
    if (!(phi >= 0.0) || phi >= 1.0) {
        throw std::runtime_error("beliefs: phi must be in [0, 1)");
    }
    if (noise.sigma < 0.0) {
        throw std::runtime_error("beliefs: noise sigma must be >= 0");
    }
    BeliefState b;
    b.method_ = method;
    b.phi_ = phi;
    const auto arcs = static_cast<std::size_t>(g.arc_count());
    b.anchor_value_.reserve(arcs);
    b.base_weight_.reserve(arcs);
    for (const Arc& a : g.arcs()) {
        b.anchor_value_.push_back(a.base_weight);
        b.base_weight_.push_back(a.base_weight);
    }
    b.anchor_time_.assign(arcs, 0.0);
    if (noise.sigma > 0.0) {
        Rng rng(noise.seed);
        b.noise_mult_.reserve(arcs);
        for (std::size_t i = 0; i < arcs; ++i) {
            b.noise_mult_.push_back(std::max(0.05, 1.0 + noise.sigma * rng.normal()));
        }
    }
    b.mean_sum_ = 0.0;
    for (std::size_t i = 0; i < arcs; ++i) b.mean_sum_ += b.effective_anchor(i);
    return b;
}

void BeliefState::record_observation(EdgeId arc, double observed_weight, double t_now) {
    if (!(observed_weight > 0.0) || !std::isfinite(observed_weight)) {
        throw std::runtime_error("beliefs: observed weight must be > 0");
    }
    if (method_ == Handling::lazy || method_ == Handling::omniscient) {
        return;
    }
    const auto i = static_cast<std::size_t>(arc);
    const double mult = noise_mult_.empty() ? 1.0 : noise_mult_[i];
    mean_sum_ += (observed_weight - anchor_value_[i]) * mult;
    anchor_value_[i] = observed_weight;
    anchor_time_[i] = t_now;
}

double BeliefState::believed_weight(EdgeId arc, double t_now,
                                    const DynamicProfile* truth) const {
    const auto i = static_cast<std::size_t>(arc);
    switch (method_) {
        case Handling::lazy:
        case Handling::simple:
            return effective_anchor(i);
        case Handling::omniscient:
            // No profile means a static environment: the base weight is the truth.
            return truth ? base_weight_[i] / speed_scale(*truth, arc, t_now)
                         : base_weight_[i];
        case Handling::decay: {
            const double elapsed = t_now - anchor_time_[i];
            if (elapsed < 0.0) {
                throw std::runtime_error("beliefs: read before last anchor time");
            }
            const double mean = collective_mean();
            const double keep = std::exp(elapsed * std::log1p(-phi_));
            // Convex combination: equals the anchor at elapsed=0 and tends to
            // the team mean as elapsed grows, never leaving that interval.
            return mean + keep * (effective_anchor(i) - mean);
        }
    }
    throw std::logic_error("beliefs: unhandled method");
}

}  // namespace patrol
