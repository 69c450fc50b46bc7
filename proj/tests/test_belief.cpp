#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "patrol/belief.hpp"
#include "patrol/graph.hpp"
#include "patrol/rng.hpp"

using namespace patrol;

namespace {

// Directed 2-cycle: exactly two arcs, one weight each.
PatrolGraph two_arcs(double w01, double w10) {
    return PatrolGraph::create({{0, {}, {}}, {1, {}, {}}}, {{0, 1, w01}, {1, 0, w10}},
                               true);
}

// Independent oracle for the decay read: iterate the per-second recurrence
// W <- (1-phi) W + phi W_mean. The closed form must agree.
double decay_recurrence(double anchor, double mean, double phi, int steps) {
    double w = anchor;
    for (int i = 0; i < steps; ++i) w = (1.0 - phi) * w + phi * mean;
    return w;
}

}  // namespace

TEST_CASE("method names round trip") {
    for (Handling m : {Handling::lazy, Handling::simple, Handling::omniscient,
                       Handling::decay}) {
        CHECK(handling_from_name(to_string(m)) == m);
    }
    CHECK_THROWS_AS(handling_from_name("psychic"), std::runtime_error);
}

TEST_CASE("initialization") {
    SUBCASE("anchors equal base weights without noise") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        const BeliefState b = BeliefState::init(g, Handling::simple);
        CHECK(b.anchor_value(0) == 10.0);
        CHECK(b.anchor_value(1) == 20.0);
        CHECK(b.collective_mean() == 15.0);
        CHECK(b.noise_multiplier(0) == 1.0);
    }
    SUBCASE("triangle of weights 10/20/30 means 20") {
        const PatrolGraph g = PatrolGraph::create(
            {{0, {}, {}}, {1, {}, {}}, {2, {}, {}}},
            {{0, 1, 10}, {1, 2, 20}, {2, 0, 30}}, true);
        CHECK(BeliefState::init(g, Handling::lazy).collective_mean() == 20.0);
    }
    SUBCASE("zero sigma is exact") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        const BeliefState b = BeliefState::init(g, Handling::lazy, 0.0025, {0.0, 99});
        CHECK(b.believed_weight(0, 100.0) == 10.0);
    }
    SUBCASE("noise multipliers clamp at 0.05 of base") {
        const PatrolGraph g = generate_grid_graph(4, 4, 10.0);
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            const BeliefState b = BeliefState::init(g, Handling::lazy, 0.0025, {1.6, seed});
            for (EdgeId e = 0; e < g.arc_count(); ++e) {
                CHECK(b.believed_weight(e, 0.0) >= 0.05 * g.arc(e).base_weight);
            }
        }
    }
    SUBCASE("noise draws are deterministic in the seed") {
        const PatrolGraph g = generate_grid_graph(3, 3, 10.0);
        const BeliefState a = BeliefState::init(g, Handling::lazy, 0.0025, {0.4, 7});
        const BeliefState b = BeliefState::init(g, Handling::lazy, 0.0025, {0.4, 7});
        const BeliefState c = BeliefState::init(g, Handling::lazy, 0.0025, {0.4, 8});
        bool any_diff = false;
        for (EdgeId e = 0; e < g.arc_count(); ++e) {
            CHECK(a.noise_multiplier(e) == b.noise_multiplier(e));
            any_diff |= a.noise_multiplier(e) != c.noise_multiplier(e);
        }
        CHECK(any_diff);
    }
    SUBCASE("bad arguments") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        CHECK_THROWS_AS(BeliefState::init(g, Handling::decay, 1.0), std::runtime_error);
        CHECK_THROWS_AS(BeliefState::init(g, Handling::lazy, 0.0025, {-0.1, 0}),
                        std::runtime_error);
    }
}

TEST_CASE("record_observation") {
    SUBCASE("updates anchor and mean for simple") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        BeliefState b = BeliefState::init(g, Handling::simple);
        b.record_observation(0, 30.0, 5.0);
        CHECK(b.anchor_value(0) == 30.0);
        CHECK(b.anchor_time(0) == 5.0);
        CHECK(b.collective_mean() == 25.0);
    }
    SUBCASE("no-op for lazy") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        BeliefState b = BeliefState::init(g, Handling::lazy);
        b.record_observation(0, 30.0, 5.0);
        CHECK(b.anchor_value(0) == 10.0);
        CHECK(b.collective_mean() == 15.0);
    }
    SUBCASE("no-op for omniscient") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        BeliefState b = BeliefState::init(g, Handling::omniscient);
        b.record_observation(0, 30.0, 5.0);
        CHECK(b.anchor_value(0) == 10.0);
    }
    SUBCASE("observing the current anchor leaves the mean unchanged") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        BeliefState b = BeliefState::init(g, Handling::decay);
        b.record_observation(0, 10.0, 7.0);
        CHECK(b.collective_mean() == 15.0);
        CHECK(b.anchor_time(0) == 7.0);
    }
    SUBCASE("rejects nonpositive observations") {
        const PatrolGraph g = two_arcs(10.0, 20.0);
        BeliefState b = BeliefState::init(g, Handling::simple);
        CHECK_THROWS_AS(b.record_observation(0, 0.0, 1.0), std::runtime_error);
        CHECK_THROWS_AS(b.record_observation(0, -3.0, 1.0), std::runtime_error);
    }
}

TEST_CASE("believed_weight per method") {
    SUBCASE("decay at zero elapsed time returns the anchor exactly") {
        const PatrolGraph g = two_arcs(10.0, 30.0);
        BeliefState b = BeliefState::init(g, Handling::decay);
        b.record_observation(0, 17.0, 40.0);
        CHECK(b.believed_weight(0, 40.0) == 17.0);
    }
    SUBCASE("decay toward the mean matches the iterated recurrence") {
        // Anchors {10, 30} give a collective mean of 20.
        const PatrolGraph g = two_arcs(10.0, 30.0);
        const BeliefState b = BeliefState::init(g, Handling::decay, 0.0025);
        const double got = b.believed_weight(0, 100.0);
        CHECK(got == doctest::Approx(12.214).epsilon(1e-4));
        const double oracle = decay_recurrence(10.0, 20.0, 0.0025, 100);
        CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("closed form equals the recurrence across elapsed times") {
        Rng rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            const double a = 1.0 + 99.0 * rng.uniform01();
            const double c = 1.0 + 99.0 * rng.uniform01();
            const PatrolGraph g = two_arcs(a, c);
            const BeliefState b = BeliefState::init(g, Handling::decay, 0.0025);
            const double mean = (a + c) / 2.0;
            for (int steps : {1, 3, 10, 50, 250, 1000}) {
                const double oracle = decay_recurrence(a, mean, 0.0025, steps);
                CHECK(b.believed_weight(0, steps) ==
                      doctest::Approx(oracle).epsilon(1e-9));
            }
        }
    }
    SUBCASE("decay is monotone toward the mean and bounded by it") {
        const PatrolGraph g = two_arcs(10.0, 30.0);
        const BeliefState b = BeliefState::init(g, Handling::decay);
        double prev = b.believed_weight(0, 0.0);
        for (double t = 50.0; t <= 5000.0; t += 50.0) {
            const double w = b.believed_weight(0, t);
            CHECK(w >= prev);
            CHECK(w >= 10.0);
            CHECK(w <= 20.0);
            prev = w;
        }
        CHECK(b.believed_weight(0, 1e7) == doctest::Approx(20.0).epsilon(1e-9));
    }
    SUBCASE("lazy and simple reads are time invariant between observations") {
        const PatrolGraph g = two_arcs(10.0, 30.0);
        BeliefState b = BeliefState::init(g, Handling::simple);
        b.record_observation(0, 25.0, 10.0);
        CHECK(b.believed_weight(0, 10.0) == 25.0);
        CHECK(b.believed_weight(0, 500.0) == 25.0);
        const BeliefState lazy = BeliefState::init(g, Handling::lazy);
        CHECK(lazy.believed_weight(0, 0.0) == lazy.believed_weight(0, 2500.0));
    }
    SUBCASE("omniscient divides base weight by the current scale") {
        const PatrolGraph g = two_arcs(10.0, 30.0);
        DynamicProfile p;
        p.kind = "constant";
        p.sample_interval = 100.0;
        p.horizon = 100.0;
        p.arc_series = {0, 0};
        p.series = {{0.5}};
        const BeliefState b = BeliefState::init(g, Handling::omniscient);
        CHECK(b.believed_weight(0, 50.0, &p) == 20.0);
        // Without a profile the environment is static.
        CHECK(b.believed_weight(0, 50.0) == 10.0);
    }
    SUBCASE("reads before the anchor time are rejected") {
        const PatrolGraph g = two_arcs(10.0, 30.0);
        BeliefState b = BeliefState::init(g, Handling::decay);
        b.record_observation(0, 12.0, 100.0);
        CHECK_THROWS_AS(b.believed_weight(0, 50.0), std::runtime_error);
    }
}

TEST_CASE("uniform scaling preserves the ordering of believed weights") {
    Rng rng(4242);
    for (double c : {0.1, 3.0, 1000.0}) {
        const double w0 = 5.0 + 20.0 * rng.uniform01();
        const double w1 = 5.0 + 20.0 * rng.uniform01();
        const PatrolGraph g = two_arcs(w0, w1);
        const PatrolGraph gs = two_arcs(c * w0, c * w1);
        const BeliefState b = BeliefState::init(g, Handling::decay);
        const BeliefState bs = BeliefState::init(gs, Handling::decay);
        for (double t : {0.0, 100.0, 1000.0}) {
            const double r0 = b.believed_weight(0, t);
            const double r1 = b.believed_weight(1, t);
            const double s0 = bs.believed_weight(0, t);
            const double s1 = bs.believed_weight(1, t);
            CHECK(s0 == doctest::Approx(c * r0).epsilon(1e-12));
            CHECK((r0 < r1) == (s0 < s1));
        }
    }
}

TEST_CASE("simple reads keep the per-run noise multiplier after observations") {
    const PatrolGraph g = two_arcs(10.0, 30.0);
    BeliefState b = BeliefState::init(g, Handling::simple, 0.0025, {0.5, 11});
    const double mult = b.noise_multiplier(0);
    b.record_observation(0, 40.0, 5.0);
    CHECK(b.believed_weight(0, 6.0) == 40.0 * mult);
}
