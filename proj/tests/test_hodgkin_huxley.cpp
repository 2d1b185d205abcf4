#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "neurotwin/hodgkin_huxley.hpp"
#include "neurotwin/rng.hpp"
#include "oracles.hpp"

using namespace neurotwin;

TEST_CASE("zero-length step returns the state unchanged") {
    const HHState s = hh_steady_state();
    const HHState out = hh_step(s, HHParams{}, 5.0, 0.0);
    CHECK(out.v == s.v);
    CHECK(out.m == s.m);
    CHECK(out.h == s.h);
    CHECK(out.n == s.n);
}

TEST_CASE("non-finite inputs are rejected with the offending field named") {
    HHState s = hh_steady_state();
    s.v = std::numeric_limits<double>::infinity();
    CHECK_THROWS_WITH_AS(hh_step(s, HHParams{}, 0.0, 0.01), doctest::Contains("HHState.v"),
                         std::invalid_argument);
    HHParams p;
    p.g_na = std::nan("");
    CHECK_THROWS_WITH_AS(hh_step(hh_steady_state(), p, 0.0, 0.01),
                         doctest::Contains("HHParams.g_na"), std::invalid_argument);
    CHECK_THROWS_AS(hh_step(hh_steady_state(), HHParams{}, 0.0, -0.1), std::invalid_argument);
}

TEST_CASE("quiescent membrane settles onto the reference resting value") {
    // reference: independent integration at dt = 1e-4 ms
    const std::vector<double> ref = oracle::hh_ref_trace(0.0, 100.0, 1e-4);
    const VoltageTrace trace = hh_simulate(hh_steady_state(), HHParams{}, 0.0, 100.0, 0.01);
    CHECK(std::abs(trace.v.back() - ref.back()) < 1.0);
}

TEST_CASE("sustained drive spikes periodically with the reference interval") {
    const double i_ext = 10.0;
    const std::vector<double> ref = oracle::hh_ref_trace(i_ext, 200.0, 1e-4);
    const std::vector<double> ref_times = oracle::ref_spike_times(ref, 1e-4);
    REQUIRE(ref_times.size() >= 5);
    const double ref_isi = (ref_times.back() - ref_times[1]) /
                           static_cast<double>(ref_times.size() - 2);

    const VoltageTrace trace = hh_simulate(hh_steady_state(), HHParams{}, i_ext, 200.0, 0.01);
    const std::vector<double> times = spike_times(trace);
    REQUIRE(times.size() >= 5);
    const double isi = (times.back() - times[1]) / static_cast<double>(times.size() - 2);
    CHECK(std::abs(isi - ref_isi) / ref_isi < 0.02);
}

TEST_CASE("gating variables stay inside [0,1] for random drives and step sizes") {
    SplitRng rng(20240);
    for (int trial = 0; trial < 6; ++trial) {
        const double i_ext = rng.next_uniform(-10.0, 30.0);
        const double dt = rng.next_uniform(0.005, 0.05);
        HHState s = hh_steady_state(rng.next_uniform(-90.0, 20.0));
        const auto steps = static_cast<std::size_t>(std::llround(1000.0 / dt));
        for (std::size_t k = 0; k < steps; ++k) {
            s = hh_step(s, HHParams{}, i_ext, dt);
            REQUIRE(s.m >= 0.0);
            REQUIRE(s.m <= 1.0);
            REQUIRE(s.h >= 0.0);
            REQUIRE(s.h <= 1.0);
            REQUIRE(s.n >= 0.0);
            REQUIRE(s.n <= 1.0);
        }
    }
}

TEST_CASE("spike amplitudes barely move across suprathreshold drives") {
    // amplitude = excursion from the resting potential, the quantity the
    // all-or-none law is about
    const double v_rest = hh_steady_state().v;
    std::vector<double> amplitudes;
    for (double i_ext : {10.0, 15.0, 20.0}) {
        const VoltageTrace trace = hh_simulate(hh_steady_state(), HHParams{}, i_ext, 120.0, 0.01);
        for (double p : spike_peaks(trace)) amplitudes.push_back(p - v_rest);
    }
    REQUIRE(amplitudes.size() >= 10);
    const double mean = std::accumulate(amplitudes.begin(), amplitudes.end(), 0.0) /
                        static_cast<double>(amplitudes.size());
    double var = 0.0;
    for (double a : amplitudes) var += (a - mean) * (a - mean);
    var /= static_cast<double>(amplitudes.size());
    CHECK(std::sqrt(var) / std::abs(mean) < 0.05);
}

TEST_CASE("all-or-none readout emits exactly two output values") {
    SUBCASE("trace never crossing threshold") {
        const std::vector<double> quiet(100, -40.0);
        const auto train = all_or_none_readout(quiet, 0.0, 30.0);
        for (double x : train) CHECK(x == 0.0);
    }
    SUBCASE("two upward crossings produce two identical pulses") {
        const std::vector<double> v = {-10, 5, 8, -3, -7, 12, 4, -9};
        const auto train = all_or_none_readout(v, 0.0, 30.0);
        int pulses = 0;
        for (double x : train) {
            CHECK((x == 0.0 || x == 30.0));
            if (x == 30.0) ++pulses;
        }
        CHECK(pulses == 2);
    }
    SUBCASE("pulse count equals the reference spike count") {
        const std::vector<double> ref = oracle::hh_ref_trace(10.0, 150.0, 1e-4);
        const std::size_t ref_count = oracle::ref_spike_times(ref, 1e-4).size();
        const VoltageTrace trace = hh_simulate(hh_steady_state(), HHParams{}, 10.0, 150.0, 0.01);
        const auto train = all_or_none_readout(trace.v, 0.0, 1.0);
        std::size_t pulses = 0;
        for (double x : train) pulses += x == 1.0 ? 1 : 0;
        CHECK(pulses == ref_count);
    }
    SUBCASE("non-finite trace rejected") {
        CHECK_THROWS_AS(all_or_none_readout({0.0, std::nan("")}, 0.0, 1.0),
                        std::invalid_argument);
    }
}
