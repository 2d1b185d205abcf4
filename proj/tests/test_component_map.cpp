#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "neurotwin/component_map.hpp"

using namespace neurotwin;

TEST_CASE("box validation rejects bad bounds") {
    CHECK_THROWS_AS(box1(1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(box1(2.0, 1.0).validate(), std::invalid_argument);
    Box nan_box = box1(0.0, 1.0);
    nan_box.hi[0] = std::nan("");
    CHECK_THROWS_AS(nan_box.validate(), std::invalid_argument);
    CHECK_NOTHROW(box2(0, 1, -2, 2).validate());
}

TEST_CASE("grid coordinates sit at cell midpoints") {
    const ComponentMap m = sample_map1(0.0, 1.0, 4, [](double x) { return x; });
    CHECK(m.coord(0, 0) == doctest::Approx(0.125));
    CHECK(m.coord(0, 3) == doctest::Approx(0.875));
    CHECK(m.cell_width(0) == doctest::Approx(0.25));
    CHECK(m.point(2)[0] == doctest::Approx(0.625));
}

TEST_CASE("interpolation reproduces samples and is linear between them") {
    const ComponentMap m = sample_map1(-1.0, 1.0, 32, [](double x) { return 2.0 * x + 1.0; });
    for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK(m.interpolate1(m.coord(0, k)) == doctest::Approx(m.value[k]));
    }
    CHECK(m.interpolate1(0.31) == doctest::Approx(2.0 * 0.31 + 1.0));
    // clamped beyond the sample hull
    CHECK(m.interpolate1(-5.0) == doctest::Approx(m.value.front()));
    CHECK(m.interpolate1(5.0) == doctest::Approx(m.value.back()));
}

TEST_CASE("bilinear interpolation matches a bilinear function exactly") {
    const ComponentMap m = sample_map(box2(0, 1, 0, 2), {16, 24}, [](std::span<const double> x) {
        return 3.0 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1];
    });
    const double xs[2] = {0.4, 1.3};
    CHECK(m.interpolate(xs) == doctest::Approx(3.0 + 2.0 * 0.4 - 1.3 + 0.5 * 0.4 * 1.3));
}

TEST_CASE("validation names structural problems") {
    ComponentMap m = sample_map1(0.0, 1.0, 8, [](double x) { return x; });
    m.value.pop_back();
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);

    ComponentMap bad = sample_map1(0.0, 1.0, 8, [](double x) { return x; });
    bad.value[3] = std::nan("");
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    ComponentMap p = sample_map1(0.0, 1.0, 8, [](double x) { return x; });
    p.probability.assign(p.size(), 1.5);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("json round trip preserves every channel") {
    ComponentMap m = sample_map1(0.0, 2.0, 16, [](double x) { return std::sin(x); });
    m.probability.assign(m.size(), 0.75);
    m.delay.assign(m.size(), 2.0);
    const ComponentMap back = map_from_json(map_to_json(m));
    CHECK(back.domain.lo == m.domain.lo);
    CHECK(back.domain.hi == m.domain.hi);
    CHECK(back.shape == m.shape);
    CHECK(back.value == m.value);
    CHECK(back.probability == m.probability);
    CHECK(back.delay == m.delay);
    CHECK_FALSE(back.has_evaluator());
}

TEST_CASE("csv round trip reconstructs the midpoint grid") {
    ComponentMap m = sample_map1(-1.0, 3.0, 25, [](double x) { return x * x; });
    const ComponentMap back = map_from_csv(map_to_csv(m));
    CHECK(back.shape == m.shape);
    CHECK(back.domain.lo[0] == doctest::Approx(m.domain.lo[0]));
    CHECK(back.domain.hi[0] == doctest::Approx(m.domain.hi[0]));
    for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK(back.value[k] == doctest::Approx(m.value[k]));
    }
}

TEST_CASE("2-d csv round trip keeps row-major layout") {
    ComponentMap m = sample_map(box2(0, 1, 0, 1), {8, 12}, [](std::span<const double> x) {
        return x[0] - 2.0 * x[1];
    });
    const ComponentMap back = map_from_csv(map_to_csv(m));
    CHECK(back.shape == m.shape);
    for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK(back.value[k] == doctest::Approx(m.value[k]));
    }
}
