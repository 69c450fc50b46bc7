#include "patrol/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "patrol/rng.hpp"

namespace patrol {
namespace {

using ordered_json = nlohmann::ordered_json;

std::size_t sample_count(double horizon, double interval) {
    return static_cast<std::size_t>(std::floor(horizon / interval)) + 1;
}

void check_generator_args(double horizon, double sample_interval) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::runtime_error("profile: horizon must be > 0");
    }
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
        throw std::runtime_error("profile: sample_interval must be > 0");
    }
}

// Identity-per-edge mapping for generated profiles: one slot per authored
// edge, both directions of an undirected edge pointing at the same slot.
std::vector<std::int32_t> arc_series_of(const PatrolGraph& g) {
    std::vector<std::int32_t> m;
    m.reserve(static_cast<std::size_t>(g.arc_count()));
    for (const Arc& a : g.arcs()) m.push_back(a.series);
    return m;
}

template <typename MakeSeries>
DynamicProfile generate(const PatrolGraph& g, double horizon, std::uint64_t seed,
                        double interval, bool shared, std::string kind,
                        std::string params_json, MakeSeries&& make_series) {
    check_generator_args(horizon, interval);
    DynamicProfile p;
    p.kind = std::move(kind);
    p.params_json = std::move(params_json);
    p.seed = seed;
    p.sample_interval = interval;
    p.horizon = horizon;
    p.arc_series = arc_series_of(g);
    const std::size_t slots = static_cast<std::size_t>(g.series_count());
    const std::size_t n = sample_count(horizon, interval);
    p.series.reserve(slots);
    for (std::size_t s = 0; s < slots; ++s) {
        if (shared && s > 0) {
            p.series.push_back(p.series.front());
            continue;
        }
        Rng rng(mix_seed(seed, s));
        p.series.push_back(make_series(rng, n));
    }
    return p;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;  // constant series convention
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double speed_scale(const DynamicProfile& p, EdgeId arc, double t) {
    if (t < 0.0 || t > p.horizon) {
        throw std::runtime_error("profile: t=" + std::to_string(t) +
                                 " outside covered window [0, " +
                                 std::to_string(p.horizon) + "]");
    }
    const auto& s = p.series[static_cast<std::size_t>(
        p.arc_series[static_cast<std::size_t>(arc)])];
    auto idx = static_cast<std::size_t>(std::floor(t / p.sample_interval));
    if (idx >= s.size()) idx = s.size() - 1;  // t == horizon holds the last sample
    return s[idx];
}

void validate_profile(const DynamicProfile& p, const PatrolGraph& g) {
    check_generator_args(p.horizon, p.sample_interval);
    if (p.arc_series.size() != static_cast<std::size_t>(g.arc_count())) {
        throw std::runtime_error("profile: arc mapping size " +
                                 std::to_string(p.arc_series.size()) +
                                 " does not match graph arc count " +
                                 std::to_string(g.arc_count()));
    }
    const auto needed = static_cast<std::size_t>(std::ceil(p.horizon / p.sample_interval));
    for (std::int32_t slot : p.arc_series) {
        if (slot < 0 || static_cast<std::size_t>(slot) >= p.series.size()) {
            throw std::runtime_error("profile: series slot out of range");
        }
    }
    for (const auto& s : p.series) {
        if (s.size() < std::max<std::size_t>(needed, 1)) {
            throw std::runtime_error("profile: series does not cover [0, horizon]");
        }
        for (double v : s) {
            if (!std::isfinite(v) || v <= 0.0) {
                throw std::runtime_error("profile: speed scale samples must be > 0");
            }
        }
    }
}

DynamicProfile generate_blockages(const PatrolGraph& g, double horizon, std::uint64_t seed,
                                  const BlockageParams& params) {
    if (!(params.mean_block_duration > 0.0) || !(params.mean_gap_duration > 0.0)) {
        throw std::runtime_error("blockages: durations must be > 0");
    }
    if (!(params.block_scale > 0.0) || params.block_scale > 1.0) {
        throw std::runtime_error("blockages: block_scale must be in (0, 1]");
    }
    ordered_json pj{{"block_scale", params.block_scale},
                    {"mean_block_duration", params.mean_block_duration},
                    {"mean_gap_duration", params.mean_gap_duration},
                    {"shared", params.shared}};
    const double interval = params.sample_interval;
    return generate(
        g, horizon, seed, interval, params.shared, "blockages", pj.dump(),
        [&](Rng& rng, std::size_t n) {
            std::vector<double> out(n);
            bool blocked = false;  // starts in a gap
            double state_end = rng.exponential(params.mean_gap_duration);
            for (std::size_t k = 0; k < n; ++k) {
                const double t = static_cast<double>(k) * interval;
                while (t >= state_end) {
                    blocked = !blocked;
                    state_end += rng.exponential(blocked ? params.mean_block_duration
                                                         : params.mean_gap_duration);
                }
                out[k] = blocked ? params.block_scale : 1.0;
            }
            return out;
        });
}

DynamicProfile generate_fast_walk(const PatrolGraph& g, double horizon, std::uint64_t seed,
                                  const FastWalkParams& params) {
    if (!(params.step_sigma >= 0.0)) {
        throw std::runtime_error("fast_walk: step_sigma must be >= 0");
    }
    if (!(params.floor > 0.0) || !(params.floor < 1.0)) {
        throw std::runtime_error("fast_walk: floor must be in (0, 1)");
    }
    ordered_json pj{{"step_sigma", params.step_sigma},
                    {"floor", params.floor},
                    {"shared", params.shared}};
    return generate(g, horizon, seed, params.sample_interval, params.shared, "fast_walk",
                    pj.dump(), [&](Rng& rng, std::size_t n) {
                        std::vector<double> out(n);
                        double x = 1.0;
                        out[0] = x;
                        for (std::size_t k = 1; k < n; ++k) {
                            x = std::clamp(x + params.step_sigma * rng.normal(),
                                           params.floor, 1.0);
                            out[k] = x;
                        }
                        return out;
                    });
}

DynamicProfile generate_smooth_walk(const PatrolGraph& g, double horizon, std::uint64_t seed,
                                    const SmoothWalkParams& params) {
    if (!(params.momentum >= 0.0) || params.momentum >= 1.0) {
        throw std::runtime_error("smooth_walk: momentum must be in [0, 1)");
    }
    if (params.window < 1) {
        throw std::runtime_error("smooth_walk: window must be >= 1");
    }
    if (!(params.floor > 0.0)) {
        throw std::runtime_error("smooth_walk: floor must be > 0");
    }
    ordered_json pj{{"step_sigma", params.step_sigma},
                    {"momentum", params.momentum},
                    {"window", params.window},
                    {"floor", params.floor},
                    {"shared", params.shared}};
    const int w = params.window;
    return generate(g, horizon, seed, params.sample_interval, params.shared, "smooth_walk",
                    pj.dump(), [&](Rng& rng, std::size_t n) {
                        std::vector<double> raw(n);
                        double x = 1.0, v = 0.0;
                        raw[0] = x;
                        for (std::size_t k = 1; k < n; ++k) {
                            v = params.momentum * v + params.step_sigma * rng.normal();
                            x += v;
                            raw[k] = x;
                        }
                        // Centered rolling mean, truncated at the ends.
                        std::vector<double> out(n);
                        for (std::size_t k = 0; k < n; ++k) {
                            const auto ki = static_cast<std::ptrdiff_t>(k);
                            const auto lo = std::max<std::ptrdiff_t>(0, ki - w / 2);
                            const auto hi = std::min<std::ptrdiff_t>(
                                static_cast<std::ptrdiff_t>(n) - 1, ki + (w - 1) / 2);
                            double sum = 0.0;
                            for (auto i = lo; i <= hi; ++i) {
                                sum += raw[static_cast<std::size_t>(i)];
                            }
                            out[k] = std::max(params.floor,
                                              sum / static_cast<double>(hi - lo + 1));
                        }
                        return out;
                    });
}

IngestResult ingest_travel_times(const PatrolGraph& g,
                                 const std::vector<TravelTimeRow>& rows) {
    if (rows.empty()) {
        throw std::runtime_error("ingest: no rows");
    }
    for (const TravelTimeRow& r : rows) {
        if (!std::isfinite(r.travel_seconds) || r.travel_seconds <= 0.0) {
            throw std::runtime_error("ingest: nonpositive travel time on arc " +
                                     std::to_string(r.from) + "->" + std::to_string(r.to));
        }
    }

    std::vector<double> grid;
    for (const TravelTimeRow& r : rows) grid.push_back(r.t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.front() != 0.0) {
        throw std::runtime_error("ingest: time grid must start at 0");
    }
    if (grid.size() < 2) {
        throw std::runtime_error("ingest: need at least 2 grid times");
    }
    const double interval = grid[1] - grid[0];
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (std::abs(grid[k] - grid[k - 1] - interval) > 1e-6 * interval) {
            throw std::runtime_error("ingest: irregular timestamps, expected a uniform grid");
        }
    }

    const auto arcs = static_cast<std::size_t>(g.arc_count());
    const std::size_t steps = grid.size();
    std::vector<std::vector<double>> tt(arcs, std::vector<double>(steps, -1.0));
    for (const TravelTimeRow& r : rows) {
        const EdgeId e = g.arc_between(r.from, r.to);  // throws on unknown arc
        const auto k = static_cast<std::size_t>(std::llround(r.t / interval));
        if (k >= steps || std::abs(r.t - static_cast<double>(k) * interval) > 1e-6 * interval) {
            throw std::runtime_error("ingest: timestamp off the uniform grid");
        }
        auto& cell = tt[static_cast<std::size_t>(e)][k];
        if (cell >= 0.0) {
            throw std::runtime_error("ingest: duplicate sample for arc " +
                                     std::to_string(r.from) + "->" + std::to_string(r.to));
        }
        cell = r.travel_seconds;
    }
    for (std::size_t e = 0; e < arcs; ++e) {
        for (std::size_t k = 0; k < steps; ++k) {
            if (tt[e][k] < 0.0) {
                const Arc& a = g.arc(static_cast<EdgeId>(e));
                throw std::runtime_error(
                    "ingest: missing coverage for arc " + std::to_string(a.from) + "->" +
                    std::to_string(a.to) + " at t=" +
                    std::to_string(static_cast<double>(k) * interval));
            }
        }
    }

    std::vector<double> base(arcs);
    for (std::size_t e = 0; e < arcs; ++e) {
        base[e] = *std::min_element(tt[e].begin(), tt[e].end());
    }

    IngestResult result{g.with_arc_weights(base), DynamicProfile{}};
    DynamicProfile& p = result.profile;
    p.kind = "traffic";
    p.params_json = ordered_json{{"source", "ingest"}}.dump();
    p.sample_interval = interval;
    p.horizon = grid.back();
    p.arc_series = arc_series_of(result.graph);
    p.series.resize(arcs, std::vector<double>(steps));
    for (std::size_t e = 0; e < arcs; ++e) {
        for (std::size_t k = 0; k < steps; ++k) {
            p.series[e][k] = base[e] / tt[e][k];
        }
    }
    validate_profile(p, result.graph);
    return result;
}

std::vector<TravelTimeRow> export_travel_times(const PatrolGraph& g,
                                               const DynamicProfile& p) {
    validate_profile(p, g);
    std::vector<TravelTimeRow> rows;
    std::size_t steps = 0;
    for (const auto& s : p.series) steps = std::max(steps, s.size());
    rows.reserve(steps * static_cast<std::size_t>(g.arc_count()));
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * p.sample_interval;
        for (EdgeId e = 0; e < g.arc_count(); ++e) {
            const auto& s = p.series[static_cast<std::size_t>(
                p.arc_series[static_cast<std::size_t>(e)])];
            const double scale = s[std::min(k, s.size() - 1)];
            rows.push_back({t, g.arc(e).from, g.arc(e).to, g.arc(e).base_weight / scale});
        }
    }
    return rows;
}

double edge_correlation(const DynamicProfile& p) {
    const std::size_t slots = p.series.size();
    if (slots < 2) {
        throw std::runtime_error("edge_correlation: need at least 2 edges");
    }
    for (const auto& s : p.series) {
        if (s.size() < 3) {
            throw std::runtime_error("edge_correlation: need at least 3 samples");
        }
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < slots; ++i) {
        for (std::size_t j = i + 1; j < slots; ++j) {
            sum += (p.series[i] == p.series[j]) ? 1.0 : pearson(p.series[i], p.series[j]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

DynamicProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("profile: cannot open " + path);
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("profile parse: " + path + ": " + e.what());
    }
    DynamicProfile p;
    p.kind = j.at("kind").get<std::string>();
    p.params_json = j.value("params", ordered_json::object()).dump();
    p.seed = j.value("seed", std::uint64_t{0});
    p.sample_interval = j.at("sample_interval").get<double>();
    p.horizon = j.at("horizon").get<double>();
    p.arc_series = j.at("arc_series").get<std::vector<std::int32_t>>();
    p.series = j.at("series").get<std::vector<std::vector<double>>>();
    return p;
}

void save_profile(const DynamicProfile& p, const std::string& path) {
    ordered_json j;
    j["kind"] = p.kind;
    j["params"] = p.params_json.empty() ? ordered_json::object()
                                        : ordered_json::parse(p.params_json);
    j["seed"] = p.seed;
    j["sample_interval"] = p.sample_interval;
    j["horizon"] = p.horizon;
    j["arc_series"] = p.arc_series;
    j["series"] = p.series;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("profile: cannot write " + path);
    }
    out << j.dump() << '\n';
}

std::vector<TravelTimeRow> load_travel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("travel csv: cannot open " + path);
    }
    std::vector<TravelTimeRow> rows;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("travel csv: empty file " + path);
    }
    if (line != "t_seconds,from,to,travel_seconds") {
        throw std::runtime_error("travel csv: bad header, expected "
                                 "t_seconds,from,to,travel_seconds");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        TravelTimeRow r;
        try {
            std::getline(ss, field, ',');
            r.t = std::stod(field);
            std::getline(ss, field, ',');
            r.from = static_cast<VertexId>(std::stol(field));
            std::getline(ss, field, ',');
            r.to = static_cast<VertexId>(std::stol(field));
            std::getline(ss, field, ',');
            r.travel_seconds = std::stod(field);
        } catch (const std::exception&) {
            throw std::runtime_error("travel csv: parse error at line " +
                                     std::to_string(lineno));
        }
        rows.push_back(r);
    }
    return rows;
}

void save_travel_csv(const std::vector<TravelTimeRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("travel csv: cannot write " + path);
    }
    out << "t_seconds,from,to,travel_seconds\n";
    char buf[128];
    for (const TravelTimeRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%d,%.17g\n", r.t, r.from, r.to,
                      r.travel_seconds);
        out << buf;
    }
}

}  // namespace patrol
