#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neurotwin/component_map.hpp"

namespace neurotwin {

// Hidden activations. Trainers and serialization accept only the bounded
// nonconstant continuous pair {logistic, tanh}; `linear` exists for gradient
// verification in tests and is rejected by validate().
enum class Activation { logistic, tanh, linear };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);
double activate(Activation a, double x);
double activate_deriv(Activation a, double x);

// Single-hidden-layer network y_o = sum_i beta_oi * g(a_i . x' + b_i), where
// x' is the input mapped affinely into the unit box via (scale_lo, scale_hi).
struct Slfn {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    Activation activation = Activation::logistic;
    std::vector<double> hidden_weights;  // L x input_dim, row-major
    std::vector<double> hidden_bias;     // L
    std::vector<double> output_weights;  // output_dim x L, row-major
    std::vector<double> scale_lo;        // input scaling box, per dimension
    std::vector<double> scale_hi;

    std::size_t hidden_count() const { return hidden_bias.size(); }
    void validate() const;
};

std::vector<double> forward(const Slfn& net, std::span<const double> x);
double forward1(const Slfn& net, double x);  // 1-D in, 1-D out convenience

std::string slfn_to_json(const Slfn& net);
Slfn slfn_from_json(const std::string& text);
void save_slfn_json(const Slfn& net, const std::string& path);
Slfn load_slfn_json(const std::string& path);

// Training dataset on a compact box. inputs is N x d row-major, targets
// N x m row-major; weights are optional per-sample quadrature weights.
struct Dataset {
    Box domain;
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<double> inputs;
    std::vector<double> targets;
    std::vector<double> weights;

    std::size_t count() const { return input_dim == 0 ? 0 : inputs.size() / input_dim; }
    void validate() const;
};

// Training grid of a map (value channel, midpoint quadrature weights).
Dataset dataset_from_map(const ComponentMap& map);
// The same grid shifted by half a cell; targets come from map.eval().
Dataset heldout_from_map(const ComponentMap& map);

struct TrainReport {
    double final_l2 = 0.0;      // discrete L2 error on the training grid
    double heldout_l2 = -1.0;   // when a held-out grid was used
    double heldout_sup = -1.0;  // max abs deviation on the held-out grid
    std::string solve_status = "ok";
    bool rank_deficient = false;
    bool diverged = false;
    bool tolerance_met = true;
    long long flop_count = 0;
    std::uint64_t seed = 0;
    std::size_t hidden_count = 0;
    std::size_t epochs = 0;
    double ridge = 0.0;
    double alpha = 0.0;
    double delta = 0.0;
    std::string method;
    std::string activation;
};

std::string train_report_to_json(const TrainReport& report);

}  // namespace neurotwin
