#pragma once

#include <cstdint>
#include <utility>

#include "neurotwin/slfn.hpp"

namespace neurotwin {

// Random-hidden-node least-squares trainer. Hidden parameters of node i are
// drawn uniformly from [-1, 1] by pure counter access on the seed, so the
// first L nodes of any two runs with the same seed coincide (nested feature
// sets). Output weights solve min ||H beta - T||^2 + ridge ||beta||^2 by a
// direct dense solve; ridge = 0 falls back to a minimum-norm SVD solution
// when the system is rank-deficient (flagged in the report).
std::pair<Slfn, TrainReport> elm_train(const Dataset& data, std::size_t hidden_count,
                                       Activation activation, double ridge,
                                       std::uint64_t seed);

// Hidden layer shared by every elm_train call with this seed. The multiscale
// ladder mixes in sharp nodes for the least-squares solver; iterative
// trainers initialize without it (multiscale = false) to keep per-example
// gradients tame.
Slfn elm_random_hidden(std::size_t input_dim, std::size_t output_dim, std::size_t hidden_count,
                       Activation activation, const Box& domain, std::uint64_t seed,
                       bool multiscale = true);

// Documented flop estimate for the dense solve path (recorded in reports;
// the exact tally exists only for the backprop trainer).
long long elm_flop_estimate(std::size_t samples, std::size_t input_dim,
                            std::size_t hidden_count, std::size_t output_dim);

}  // namespace neurotwin
