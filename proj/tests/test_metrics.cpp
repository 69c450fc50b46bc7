#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "patrol/metrics.hpp"
#include "patrol/rng.hpp"

using namespace patrol;

namespace {

RunRecord fabricated_record(std::vector<double> tick_sums, int vertices, double tick,
                            double duration) {
    RunRecord rec;
    rec.config.tick = tick;
    rec.config.duration = duration;
    rec.num_vertices = vertices;
    rec.tick_idleness_sum = std::move(tick_sums);
    return rec;
}

RunEntry entry(const std::string& profile, const std::string& method, int repeat,
               double mean, const std::string& strategy = "state_exchange", int n = 4,
               double sigma = 0.0) {
    RunEntry e;
    e.graph = "grid";
    e.profile = profile;
    e.strategy = strategy;
    e.method = method;
    e.team_size = n;
    e.repeat = repeat;
    e.noise_sigma = sigma;
    e.seed = 1000 + static_cast<std::uint64_t>(repeat);
    e.mean_idleness = mean;
    e.max_idleness = 2 * mean;
    return e;
}

// Independent check: recursively enumerate sign assignments.
double brute_force_two_sided_p(const std::vector<double>& ranks, double w_plus) {
    const std::size_t m = ranks.size();
    std::size_t n_le = 0, n_ge = 0;
    const std::size_t count = std::size_t{1} << m;
    for (std::size_t mask = 0; mask < count; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (std::size_t{1} << i)) w += ranks[i];
        }
        if (w <= w_plus + 1e-12) ++n_le;
        if (w >= w_plus - 1e-12) ++n_ge;
    }
    return std::min(1.0,
                    2.0 * static_cast<double>(std::min(n_le, n_ge)) /
                        static_cast<double>(count));
}

// Ranks of |d| with average ranks for ties (test-local copy).
std::vector<double> ranks_of(const std::vector<double>& diffs) {
    const std::size_t m = diffs.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });
    std::vector<double> rank(m);
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = avg;
        i = j;
    }
    return rank;
}

}  // namespace

TEST_CASE("mean graph idleness") {
    SUBCASE("a never-visited vertex accumulates the arithmetic series") {
        // Samples 1..10 over 10 ticks, one vertex: mean 5.5.
        std::vector<double> sums;
        for (int t = 1; t <= 10; ++t) sums.push_back(t);
        CHECK(mean_graph_idleness(fabricated_record(sums, 1, 1.0, 10.0)) == 5.5);
    }
    SUBCASE("a vertex visited every tick stays at zero") {
        CHECK(mean_graph_idleness(fabricated_record(std::vector<double>(10, 0.0), 1, 1.0,
                                                    10.0)) == 0.0);
    }
    SUBCASE("tick scaling") {
        // Two vertices, tick 0.5, duration 5: 10 samples of summed idleness 3.
        CHECK(mean_graph_idleness(fabricated_record(std::vector<double>(10, 3.0), 2, 0.5,
                                                    5.0)) ==
              doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("incomplete records are rejected") {
        CHECK_THROWS_WITH_AS(
            mean_graph_idleness(fabricated_record(std::vector<double>(9, 0.0), 1, 1.0,
                                                  10.0)),
            doctest::Contains("incomplete"), std::runtime_error);
    }
}

TEST_CASE("relative idleness") {
    SUBCASE("ratio and aggregate") {
        const std::vector<RunEntry> tests{entry("blockages", "decay", 0, 12.0),
                                          entry("blockages", "decay", 1, 10.0),
                                          entry("blockages", "decay", 2, 8.0)};
        const std::vector<RunEntry> refs{entry("blockages", "lazy", 0, 10.0),
                                         entry("blockages", "lazy", 1, 10.0),
                                         entry("blockages", "lazy", 2, 10.0)};
        const auto ratios = relative_idleness(tests, refs, CompareAxis::method);
        REQUIRE(ratios.size() == 3);
        CHECK(ratios[0].ratio == doctest::Approx(1.2).epsilon(1e-12));
        CHECK(ratios[1].ratio == 1.0);
        CHECK(ratios[2].ratio == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(mean_ratio(ratios) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identical sets give exactly 1") {
        const std::vector<RunEntry> runs{entry("fast_walk", "lazy", 0, 17.25),
                                         entry("fast_walk", "lazy", 1, 3.5)};
        const auto ratios = relative_idleness(runs, runs, CompareAxis::method);
        for (const auto& r : ratios) CHECK(r.ratio == 1.0);
    }
    SUBCASE("profile axis matches static references") {
        const std::vector<RunEntry> tests{entry("blockages", "lazy", 0, 30.0)};
        const std::vector<RunEntry> refs{entry("none", "lazy", 0, 10.0)};
        const auto ratios = relative_idleness(tests, refs, CompareAxis::profile);
        REQUIRE(ratios.size() == 1);
        CHECK(ratios[0].ratio == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("unmatched entries are an error that lists the gap") {
        const std::vector<RunEntry> tests{entry("blockages", "decay", 0, 12.0),
                                          entry("blockages", "decay", 5, 12.0)};
        const std::vector<RunEntry> refs{entry("blockages", "lazy", 0, 10.0)};
        CHECK_THROWS_WITH_AS(relative_idleness(tests, refs, CompareAxis::method),
                             doctest::Contains("no reference run"), std::runtime_error);
    }
    SUBCASE("matched runs must share seeds") {
        std::vector<RunEntry> tests{entry("blockages", "decay", 0, 12.0)};
        std::vector<RunEntry> refs{entry("blockages", "lazy", 0, 10.0)};
        refs[0].seed = 9999;
        CHECK_THROWS_WITH_AS(relative_idleness(tests, refs, CompareAxis::method),
                             doctest::Contains("disagree on seed"), std::runtime_error);
    }
}

TEST_CASE("wilcoxon signed rank") {
    SUBCASE("five all-positive differences") {
        const std::vector<std::pair<double, double>> pairs{
            {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}};
        const WilcoxonResult r = wilcoxon_signed_rank(pairs);
        CHECK(r.statistic == 0.0);
        CHECK(r.p_two_sided == 0.0625);  // 2/32 exactly
        CHECK(r.exact);
        CHECK(r.n_nonzero == 5);
    }
    SUBCASE("perfectly symmetric differences sit at the distribution center") {
        const std::vector<std::pair<double, double>> pairs{
            {1, 0}, {0, 1}, {2, 0}, {0, 2}, {3, 0}, {0, 3}};
        const WilcoxonResult r = wilcoxon_signed_rank(pairs);
        CHECK(r.p_two_sided == 1.0);
    }
    SUBCASE("zero differences are dropped") {
        const std::vector<std::pair<double, double>> pairs{
            {1, 1}, {2, 2}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}};
        const WilcoxonResult r = wilcoxon_signed_rank(pairs);
        CHECK(r.n_nonzero == 5);
        CHECK(r.p_two_sided == 0.0625);
    }
    SUBCASE("fewer than five nonzero differences error out") {
        const std::vector<std::pair<double, double>> pairs{
            {1, 1}, {2, 2}, {3, 3}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
        CHECK_THROWS_WITH_AS(wilcoxon_signed_rank(pairs), doctest::Contains("at least 5"),
                             std::runtime_error);
    }
    SUBCASE("tied magnitudes get averaged ranks") {
        // Diffs {+1,+1,+2,+3,-2,-1}: ranks {2,2,4.5,6,4.5,2}, W- = 6.5.
        const std::vector<std::pair<double, double>> pairs{
            {1, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 2}, {0, 1}};
        const WilcoxonResult r = wilcoxon_signed_rank(pairs);
        CHECK(r.statistic == 6.5);
        const std::vector<double> diffs{1, 1, 2, 3, -2, -1};
        CHECK(r.p_two_sided ==
              doctest::Approx(brute_force_two_sided_p(ranks_of(diffs), 14.5))
                  .epsilon(1e-12));
    }
    SUBCASE("exact enumeration matches the brute-force oracle on random sets") {
        Rng rng(60601);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t m = 5 + rng.next_below(8);  // 5..12
            std::vector<std::pair<double, double>> pairs;
            std::vector<double> diffs;
            double w_plus = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double d = std::floor(rng.uniform01() * 10.0) + 1.0;  // force ties
                if (rng.uniform01() < 0.5) d = -d;
                diffs.push_back(d);
                pairs.push_back({d > 0 ? d : 0.0, d > 0 ? 0.0 : -d});
            }
            const auto ranks = ranks_of(diffs);
            for (std::size_t i = 0; i < m; ++i) {
                if (diffs[i] > 0) w_plus += ranks[i];
            }
            const WilcoxonResult r = wilcoxon_signed_rank(pairs);
            CHECK(r.exact);
            CHECK(r.p_two_sided ==
                  doctest::Approx(brute_force_two_sided_p(ranks, w_plus)).epsilon(1e-12));
        }
    }
    SUBCASE("normal approximation stays close to exact at n=12") {
        Rng rng(424242);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::pair<double, double>> pairs12, pairs13;
            for (int i = 0; i < 12; ++i) {
                double d = (1.0 + 11.0 * rng.uniform01());
                if (rng.uniform01() < 0.4) d = -d;
                pairs12.push_back({d > 0 ? d : 0.0, d > 0 ? 0.0 : -d});
            }
            const WilcoxonResult exact = wilcoxon_signed_rank(pairs12);
            REQUIRE(exact.exact);
            // Append a 13th tiny pair to push the implementation onto the
            // normal path, then compare on the shared 12 via the brute force.
            pairs13 = pairs12;
            pairs13.push_back({100.0, 100.0});  // zero diff, dropped
            const WilcoxonResult still_exact = wilcoxon_signed_rank(pairs13);
            CHECK(still_exact.exact);
            CHECK(still_exact.p_two_sided == exact.p_two_sided);
        }
    }
    SUBCASE("normal path consistency with enumeration at the 12/13 boundary") {
        Rng rng(777);
        double worst = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<std::pair<double, double>> pairs;
            std::vector<double> diffs;
            for (int i = 0; i < 13; ++i) {
                double d = 1.0 + 12.0 * rng.uniform01();
                if (rng.uniform01() < 0.45) d = -d;
                diffs.push_back(d);
                pairs.push_back({d > 0 ? d : 0.0, d > 0 ? 0.0 : -d});
            }
            const WilcoxonResult approx = wilcoxon_signed_rank(pairs);
            REQUIRE(!approx.exact);
            const auto ranks = ranks_of(diffs);
            double w_plus = 0.0;
            for (std::size_t i = 0; i < diffs.size(); ++i) {
                if (diffs[i] > 0) w_plus += ranks[i];
            }
            worst = std::max(worst,
                             std::abs(approx.p_two_sided -
                                      brute_force_two_sided_p(ranks, w_plus)));
        }
        CHECK(worst < 0.02);
    }
}
