#pragma once

#include <utility>

#include "neurotwin/slfn.hpp"

namespace neurotwin {

// Iterative gradient-descent trainer: forward signal pass, backward error
// pass, per-example updates applied in dataset order. Output nodes are
// linear, hidden deltas fold the activation derivative in, and the hidden
// bias is treated as a weight from a constant-1 node. All deltas of one
// example are computed against the pre-update weights, so a single step is
// an exact gradient step of the half-squared-error loss.
std::pair<Slfn, TrainReport> bp_train(Slfn net, const Dataset& data, double alpha,
                                      std::size_t epochs);

// Max deviation between the backward-pass batch gradient and central finite
// differences of the half-squared-error loss, relative to the largest
// gradient entry (a scale-relative metric keeps near-zero entries from
// amplifying roundoff).
double bp_gradient_check(const Slfn& net, const Dataset& data, double h);

// Exact arithmetic-operation tally of bp_train:
//   epochs * samples * (3d + 5*L*d + 6L + 7*m*L + m)
// counting scale (3 per input), hidden forward (2 per weight + 1 activation),
// output forward (2 per weight), output deltas (1 per output), hidden error
// backprop (2 per weight), hidden deltas (2 per node), and weight updates
// (3 per weight incl. bias).
long long bp_flops(std::size_t epochs, std::size_t samples, std::size_t input_dim,
                   std::size_t hidden_count, std::size_t output_dim);

}  // namespace neurotwin
