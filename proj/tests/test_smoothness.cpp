#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "neurotwin/lif.hpp"
#include "neurotwin/smoothness.hpp"
#include "neurotwin/synapse.hpp"
#include "oracles.hpp"

using namespace neurotwin;

namespace {

ComponentMap sine_map(double lo, double hi, std::size_t n) {
    return sample_map1(lo, hi, n, [](double x) { return std::sin(x); });
}

ComponentMap heaviside_map(std::size_t n) {
    return sample_map1(-1.0, 1.0, n, oracle::heaviside);
}

ComponentMap lif_fi_map(std::size_t n) {
    LIFParams p;
    return sample_map1(0.0, 2.0, n, [p](double i) { return lif_rate(p, i); });
}

}  // namespace

TEST_CASE("continuous map yields zero discontinuities") {
    CheckConfig cfg;
    cfg.jump_tol = 0.1;
    const SmoothnessReport r = detect_discontinuities(sine_map(-1.0, 1.0, 64), cfg);
    CHECK(r.discontinuities.empty());
    CHECK(r.piecewise_continuous);
}

TEST_CASE("canonical jump is found, localized and measured") {
    CheckConfig cfg;
    cfg.jump_tol = 0.1;
    cfg.refine_depth = 8;
    const ComponentMap m = heaviside_map(64);
    const SmoothnessReport r = detect_discontinuities(m, cfg);
    REQUIRE(r.discontinuities.size() == 1);
    const Discontinuity& d = r.discontinuities.front();
    CHECK(std::abs(d.location[0]) < m.cell_width(0));  // within one refined cell of 0
    CHECK(d.jump == doctest::Approx(1.0));
    CHECK(d.left_limit == doctest::Approx(0.0));
    CHECK(d.right_limit == doctest::Approx(1.0));
}

TEST_CASE("rheobase of the f-I curve registers as exactly one grid-scale jump") {
    CheckConfig cfg;
    cfg.jump_tol = 0.1;
    const ComponentMap m = lif_fi_map(64);
    const SmoothnessReport r = detect_discontinuities(m, cfg);
    REQUIRE(r.discontinuities.size() == 1);
    CHECK(std::abs(r.discontinuities.front().location[0] - 1.0) < 2.0 * m.cell_width(0));
}

TEST_CASE("a nearly vertical transfer curve is flagged as a near-jump") {
    SynapseParams sp;
    sp.amplitude = 1.0;
    sp.slope = 500.0;
    sp.midpoint = 0.1;
    const ComponentMap m = synapse_map(sp, box1(-1, 1), 64);
    CheckConfig cfg;
    cfg.jump_tol = 0.1;
    const SmoothnessReport r = detect_discontinuities(m, cfg);
    REQUIRE(r.discontinuities.size() == 1);
    CHECK(std::abs(r.discontinuities.front().location[0] - sp.midpoint) < 2.0 * m.cell_width(0));
    // grid values on either side of the midpoint pin the jump estimate near
    // the full amplitude
    CHECK(r.discontinuities.front().jump > 0.9);
}

TEST_CASE("a long attained run with interior sign changes is indeterminate") {
    // samples hug the level c with alternating signs for a stretch: at grid
    // scale this is indistinguishable from dense oscillation
    ComponentMap m = sample_map1(0.0, 1.0, 64, [](double x) { return x; });
    const double c = 0.5;
    CheckConfig cfg;
    cfg.level_tol = 1e-6;
    for (std::size_t k = 20; k < 44; ++k) {
        m.value[k] = c + (k % 2 == 0 ? 0.4e-6 : -0.4e-6);
    }
    m.evaluator = nullptr;
    const AllOrNoneReport r = check_all_or_none_smoothness(m, {c, 0.9}, cfg);
    REQUIRE(r.levels.size() == 2);
    CHECK(r.levels[0].indeterminate);
    CHECK_FALSE(r.levels[1].indeterminate);
    CHECK_FALSE(r.verdict);
}

TEST_CASE("checker rejects non-finite samples and tiny grids") {
    ComponentMap m = sine_map(-1.0, 1.0, 64);
    m.value[10] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(detect_discontinuities(m), std::invalid_argument);
    CHECK_THROWS_AS(detect_discontinuities(sine_map(-1, 1, 8)), std::invalid_argument);
}

TEST_CASE("irregular points of a strict crossing") {
    const ComponentMap m = sample_map1(-1.0, 1.0, 64, [](double x) { return x; });
    const auto pts = find_irregular_points(m, 0.0);
    REQUIRE(pts.size() == 1);
    CHECK(std::abs(pts[0][0]) < 1e-9);
}

TEST_CASE("parabola: level below the range is rejected, symmetric crossings found") {
    const ComponentMap m = sample_map1(-1.0, 1.0, 64, [](double x) { return x * x; });
    CHECK_THROWS_AS(find_irregular_points(m, 0.0), std::invalid_argument);
    const auto pts = find_irregular_points(m, 0.25);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0][0] == doctest::Approx(-0.5).epsilon(0.03));
    CHECK(pts[1][0] == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("jump skips interior levels entirely") {
    const auto pts = find_irregular_points(heaviside_map(64), 0.5);
    CHECK(pts.empty());
}

TEST_CASE("level counts match brute-force enumeration on the analytic corpus") {
    CheckConfig cfg;
    cfg.jump_tol = 0.1;

    SUBCASE("sine over one full period") {
        const ComponentMap m = sine_map(-M_PI, M_PI, 256);
        for (double c : {-0.5, 0.0, 0.5}) {
            const auto expected =
                oracle::enumerate_crossings([](double x) { return std::sin(x); }, -M_PI, M_PI, c);
            const auto got = find_irregular_points(m, c, cfg);
            CHECK(got.size() == expected.size());
        }
        // frozen from the enumeration: the endpoint zeros of sin are excluded
        CHECK(find_irregular_points(m, -0.5, cfg).size() == 2);
        CHECK(find_irregular_points(m, 0.0, cfg).size() == 1);
        CHECK(find_irregular_points(m, 0.5, cfg).size() == 2);
    }

    SUBCASE("triangle wave with three periods") {
        const ComponentMap m = sample_map1(0.0, 3.0, 256, oracle::triangle_wave);
        const auto expected = oracle::enumerate_crossings(oracle::triangle_wave, 0.0, 3.0, 0.0);
        CHECK(expected.size() == 6);
        CHECK(find_irregular_points(m, 0.0, cfg).size() == 6);
    }
}

TEST_CASE("batched level check aggregates verdicts") {
    CheckConfig cfg;
    cfg.jump_tol = 0.1;
    SUBCASE("sine corpus verdict") {
        const AllOrNoneReport r =
            check_all_or_none_smoothness(sine_map(-M_PI, M_PI, 256), {-0.5, 0.0, 0.5}, cfg);
        CHECK(r.verdict);
        CHECK(r.testable_count == 3);
        CHECK(r.levels[0].count == 2);
        CHECK(r.levels[1].count == 1);
        CHECK(r.levels[2].count == 2);
    }
    SUBCASE("constant map is vacuously fine") {
        const ComponentMap m = sample_map1(0.0, 1.0, 32, [](double) { return 2.0; });
        const AllOrNoneReport r = check_all_or_none_smoothness(m, {1.9, 2.0, 2.1}, cfg);
        CHECK(r.verdict);
        CHECK(r.testable_count == 0);
        for (const auto& s : r.levels) CHECK_FALSE(s.testable);
    }
}

TEST_CASE("negating map and level mirrors the irregular points") {
    const SynapseParams sp{2.0, 3.0, 0.2, 1.0, 0.0};
    const ComponentMap m = synapse_map(sp, box1(-2, 2), 128);
    ComponentMap neg = m;
    for (double& v : neg.value) v = -v;
    neg.evaluator = [m](std::span<const double> x) { return -m.eval(x); };
    const double c = 1.0;
    const auto a = find_irregular_points(m, c);
    const auto b = find_irregular_points(neg, -c);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k][0] == doctest::Approx(b[k][0]).epsilon(1e-9));
    }
}

TEST_CASE("doubling resolution never loses a true jump") {
    CheckConfig cfg;
    cfg.jump_tol = 0.2;  // true jumps below are >= 2 * jump_tol
    const auto two_steps = [](double x) {
        return (x >= -0.4 ? 1.0 : 0.0) + (x >= 0.6 ? 1.5 : 0.0);
    };
    std::size_t prev = 0;
    for (std::size_t n : {64, 128, 256, 512}) {
        const ComponentMap m = sample_map1(-1.0, 1.0, n, two_steps);
        const std::size_t count = detect_discontinuities(m, cfg).discontinuities.size();
        CHECK(count >= prev);
        prev = count;
    }
    CHECK(prev == 2);
}

TEST_CASE("per-axis scans cover 2-d maps") {
    // vertical step in the first coordinate: one jump per scan line along axis 0
    const ComponentMap m = sample_map(box2(-1, 1, -1, 1), {32, 32}, [](std::span<const double> x) {
        return x[0] >= 0.0 ? 1.0 : 0.0;
    });
    CheckConfig cfg;
    cfg.jump_tol = 0.5;
    const SmoothnessReport r = detect_discontinuities(m, cfg);
    CHECK(r.discontinuities.size() == 32);
    for (const auto& d : r.discontinuities) {
        CHECK(d.axis == 0);
        CHECK(std::abs(d.location[0]) < m.cell_width(0));
    }
}
