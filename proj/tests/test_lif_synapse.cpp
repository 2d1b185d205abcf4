#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "neurotwin/lif.hpp"
#include "neurotwin/synapse.hpp"

using namespace neurotwin;

TEST_CASE("closed-form f-I curve") {
    LIFParams p;
    p.tau = 1.0;
    p.theta = 1.0;
    SUBCASE("subthreshold drive is silent") { CHECK(lif_rate(p, 0.5) == 0.0); }
    SUBCASE("rate at the boundary is defined as zero") { CHECK(lif_rate(p, 1.0) == 0.0); }
    SUBCASE("direct evaluation above threshold") {
        CHECK(lif_rate(p, 2.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("parameter validation") {
        LIFParams bad;
        bad.tau = 0.0;
        CHECK_THROWS_AS(lif_rate(bad, 2.0), std::invalid_argument);
        bad = LIFParams{};
        bad.theta = -1.0;
        CHECK_THROWS_AS(lif_rate(bad, 2.0), std::invalid_argument);
    }
}

TEST_CASE("f-I curve is continuous above threshold and vanishes from the right") {
    LIFParams p;
    p.tau = 2.0;
    p.theta = 1.5;
    double prev = lif_rate(p, p.theta + 1.0);
    for (double off = 1.0; off > 1e-12; off *= 0.5) {
        const double r = lif_rate(p, p.theta + off);
        CHECK(r <= prev + 1e-12);  // decreasing toward the threshold
        prev = r;
    }
    CHECK(prev < 0.02);  // right limit heads to zero (logarithmically slowly)
    // local continuity away from the threshold
    for (double i = p.theta + 0.2; i < 5.0; i += 0.3) {
        CHECK(std::abs(lif_rate(p, i + 1e-9) - lif_rate(p, i)) < 1e-6);
    }
}

TEST_CASE("synapse map channels") {
    SUBCASE("zero amplitude flattens the value channel") {
        SynapseParams sp;
        sp.amplitude = 0.0;
        const ComponentMap m = synapse_map(sp, box1(-2, 2), 32);
        for (double v : m.value) CHECK(v == 0.0);
    }
    SUBCASE("deterministic instantaneous synapse") {
        SynapseParams sp;
        sp.p = 1.0;
        sp.delay = 0.0;
        const ComponentMap m = synapse_map(sp, box1(-2, 2), 32);
        for (double v : m.probability) CHECK(v == 1.0);
        for (double v : m.delay) CHECK(v == 0.0);
    }
    SUBCASE("value channel is monotone and bounded by amplitude") {
        SynapseParams sp;
        sp.amplitude = 3.0;
        sp.slope = 2.5;
        sp.midpoint = 0.4;
        const ComponentMap m = synapse_map(sp, box1(-4, 4), 64);
        for (std::size_t k = 0; k + 1 < m.size(); ++k) CHECK(m.value[k] <= m.value[k + 1]);
        for (double v : m.value) {
            CHECK(v >= 0.0);
            CHECK(v <= sp.amplitude);
        }
    }
    SUBCASE("empty or degenerate domain rejected") {
        CHECK_THROWS_AS(synapse_map(SynapseParams{}, box1(0, 0), 32), std::invalid_argument);
        CHECK_THROWS_AS(synapse_map(SynapseParams{}, box1(-1, 1), 1), std::invalid_argument);
    }
    SUBCASE("probability outside [0,1] rejected") {
        SynapseParams sp;
        sp.p = 1.2;
        CHECK_THROWS_AS(synapse_map(sp, box1(-1, 1), 32), std::invalid_argument);
    }
}
