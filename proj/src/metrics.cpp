#include "patrol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace patrol {
namespace {

std::string match_key(const RunEntry& e, CompareAxis axis) {
    std::ostringstream key;
    key << e.graph << '|' << e.strategy << '|' << e.team_size << '|' << e.repeat;
    if (axis != CompareAxis::method) key << '|' << e.method;
    if (axis != CompareAxis::profile) key << '|' << e.profile;
    if (axis != CompareAxis::noise) key << '|' << e.noise_sigma;
    return key.str();
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double mean_graph_idleness(const RunRecord& rec) {
    const auto expected =
        static_cast<std::size_t>(std::llround(rec.config.duration / rec.config.tick));
    if (rec.tick_idleness_sum.size() != expected) {
        throw std::runtime_error("metrics: incomplete record, have " +
                                 std::to_string(rec.tick_idleness_sum.size()) +
                                 " tick samples, expected " + std::to_string(expected));
    }
    const double total =
        std::accumulate(rec.tick_idleness_sum.begin(), rec.tick_idleness_sum.end(), 0.0);
    return total * rec.config.tick /
           (rec.config.duration * static_cast<double>(rec.num_vertices));
}

double max_graph_idleness(const RunRecord& rec) { return rec.max_idleness; }

std::vector<MatchedRatio> relative_idleness(std::span<const RunEntry> tests,
                                            std::span<const RunEntry> references,
                                            CompareAxis axis) {
    std::unordered_map<std::string, const RunEntry*> by_key;
    for (const RunEntry& r : references) {
        if (!by_key.emplace(match_key(r, axis), &r).second) {
            throw std::runtime_error("relative idleness: duplicate reference entry for " +
                                     match_key(r, axis));
        }
    }
    std::vector<MatchedRatio> out;
    out.reserve(tests.size());
    std::vector<std::string> missing;
    for (const RunEntry& t : tests) {
        const auto it = by_key.find(match_key(t, axis));
        if (it == by_key.end()) {
            missing.push_back(match_key(t, axis));
            continue;
        }
        const RunEntry* ref = it->second;
        if (t.seed != ref->seed) {
            throw std::runtime_error(
                "relative idleness: matched runs disagree on seed for " +
                match_key(t, axis));
        }
        out.push_back({&t, ref, t.mean_idleness / ref->mean_idleness});
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "relative idleness: no reference run for " << missing.size()
            << " entr" << (missing.size() == 1 ? "y" : "ies") << ":";
        for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 8); ++i) {
            msg << ' ' << missing[i] << ';';
        }
        throw std::runtime_error(msg.str());
    }
    return out;
}

double mean_ratio(std::span<const MatchedRatio> ratios) {
    if (ratios.empty()) {
        throw std::runtime_error("mean ratio: no matched pairs");
    }
    double sum = 0.0;
    for (const MatchedRatio& r : ratios) sum += r.ratio;
    return sum / static_cast<double>(ratios.size());
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        const double d = x - y;
        if (d != 0.0) diffs.push_back(d);
    }
    const auto m = diffs.size();
    if (m < 5) {
        throw std::runtime_error("wilcoxon: need at least 5 non-zero differences, have " +
                                 std::to_string(m));
    }

    // Ranks of |d|, averaging within tied groups.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });
    std::vector<double> rank(m, 0.0);
    double tie_correction = 0.0;
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = avg;
        const double t = static_cast<double>(j - i);
        tie_correction += t * t * t - t;
        i = j;
    }

    double w_plus = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (diffs[i] > 0.0) w_plus += rank[i];
    }
    const double total = static_cast<double>(m) * static_cast<double>(m + 1) / 2.0;
    const double w_minus = total - w_plus;

    WilcoxonResult res;
    res.statistic = std::min(w_plus, w_minus);
    res.n_nonzero = static_cast<int>(m);

    if (m <= 12) {
        // Exact null distribution of W+ over all sign assignments.
        res.exact = true;
        const std::size_t count = std::size_t{1} << m;
        std::size_t n_le = 0, n_ge = 0;
        for (std::size_t mask = 0; mask < count; ++mask) {
            double w = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (mask & (std::size_t{1} << i)) w += rank[i];
            }
            if (w <= w_plus + 1e-12) ++n_le;
            if (w >= w_plus - 1e-12) ++n_ge;
        }
        const double tail = static_cast<double>(std::min(n_le, n_ge));
        res.p_two_sided = std::min(1.0, 2.0 * tail / static_cast<double>(count));
    } else {
        res.exact = false;
        const double md = static_cast<double>(m);
        const double mu = md * (md + 1.0) / 4.0;
        const double var = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 - tie_correction / 48.0;
        double z = w_plus - mu;
        if (z > 0.5) z -= 0.5;        // continuity correction toward the null
        else if (z < -0.5) z += 0.5;
        else z = 0.0;
        z /= std::sqrt(var);
        res.p_two_sided = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    }
    return res;
}

}  // namespace patrol
