#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "neurotwin/elm.hpp"
#include "neurotwin/train.hpp"

using namespace neurotwin;

namespace {

Dataset sine_dataset(std::size_t n) {
    const ComponentMap m =
        sample_map1(-1.0, 1.0, n, [](double x) { return std::sin(M_PI * x); });
    return dataset_from_map(m);
}

double beta_norm(const Slfn& net) {
    double acc = 0.0;
    for (double b : net.output_weights) acc += b * b;
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("zero targets with ridge give the zero network") {
    Dataset data = sine_dataset(64);
    data.targets.assign(data.targets.size(), 0.0);
    const auto [net, report] = elm_train(data, 16, Activation::logistic, 1e-6, 7);
    CHECK(beta_norm(net) == doctest::Approx(0.0));
    CHECK(report.final_l2 == doctest::Approx(0.0));
}

TEST_CASE("extreme ridge shrinks the solution toward zero") {
    Dataset data = sine_dataset(64);
    data.targets.assign(data.targets.size(), 1.0);
    const auto [net, report] = elm_train(data, 16, Activation::logistic, 1e9, 7);
    CHECK(beta_norm(net) < 1e-6);
}

TEST_CASE("pinned run: smooth target fits well below 0.05") {
    // frozen after the first verified run with this seed
    const Dataset data = sine_dataset(512);
    const auto [net, report] = elm_train(data, 200, Activation::logistic, 1e-8, 2024);
    CHECK(report.final_l2 < 0.05);
}

TEST_CASE("nested random features never hurt the training fit at ridge zero") {
    const Dataset data = sine_dataset(96);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t L : {8, 16, 32, 64}) {
        const auto [net, report] = elm_train(data, L, Activation::logistic, 0.0, 31415);
        CHECK(report.final_l2 <= prev + 1e-12);
        prev = report.final_l2;
    }
}

TEST_CASE("same seed reproduces the identical network bit for bit") {
    const Dataset data = sine_dataset(64);
    const auto [a, ra] = elm_train(data, 32, Activation::tanh, 1e-8, 555);
    const auto [b, rb] = elm_train(data, 32, Activation::tanh, 1e-8, 555);
    CHECK(a.hidden_weights == b.hidden_weights);
    CHECK(a.hidden_bias == b.hidden_bias);
    CHECK(a.output_weights == b.output_weights);
    CHECK(ra.final_l2 == rb.final_l2);
    // and the hidden prefix is shared with the larger net (nested features)
    const auto [big, rbig] = elm_train(data, 64, Activation::tanh, 1e-8, 555);
    for (std::size_t i = 0; i < a.hidden_weights.size(); ++i) {
        CHECK(big.hidden_weights[i] == a.hidden_weights[i]);
    }
}

TEST_CASE("rank-deficient ridgeless systems fall back to the minimum-norm solution") {
    // more hidden nodes than samples forces deficiency
    const Dataset data = sine_dataset(24);
    const auto [net, report] = elm_train(data, 48, Activation::logistic, 0.0, 99);
    CHECK(report.rank_deficient);
    CHECK(report.solve_status == "min-norm");
    CHECK(std::isfinite(beta_norm(net)));
    CHECK(report.final_l2 < 1e-6);  // interpolates the samples
}

TEST_CASE("trainer validates its inputs") {
    const Dataset data = sine_dataset(16);
    CHECK_THROWS_AS(elm_train(data, 0, Activation::logistic, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(elm_train(data, 8, Activation::logistic, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(elm_train(data, 8, Activation::linear, 0.0, 1), std::invalid_argument);
}
