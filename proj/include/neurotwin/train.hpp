#pragma once

#include <cstdint>

#include "neurotwin/component_map.hpp"
#include "neurotwin/slfn.hpp"

namespace neurotwin {

// Quadrature approximation of the L2(X) distance between the network and
// the map's value channel over the map's own grid (midpoint rule, uniform
// weights). Domains must match.
double l2_error(const Slfn& net, const ComponentMap& target);

enum class TrainMethod { elm, bp };

TrainMethod train_method_from_name(const std::string& name);
std::string train_method_name(TrainMethod method);

struct ToleranceConfig {
    double delta = 1e-2;
    TrainMethod method = TrainMethod::elm;
    std::size_t budget = 256;  // max hidden count (elm) or max epochs (bp)
    std::uint64_t seed = 0;
    Activation activation = Activation::logistic;
    double ridge = 0.0;  // 0 selects the minimum-norm SVD solve

    // bp-specific knobs
    double alpha = 0.25;
    std::size_t bp_hidden = 32;
};

struct ToleranceResult {
    Slfn net;
    TrainReport report;  // tolerance_met, heldout_l2/heldout_sup filled in
};

// Grows capacity until the held-out L2 error (training grid shifted by half
// a cell) drops below delta or the budget runs out: hidden count doubles
// from 8 for elm, epochs accumulate in chunks for bp. The target must pass
// the piecewise-continuity check first. On a missed budget the result with
// the lowest held-out error seen is returned, flagged unmet.
ToleranceResult train_to_tolerance(const ComponentMap& target, const ToleranceConfig& cfg);

// Held-out metrics of a net against a map (L2 and sup over the shifted grid).
struct HeldoutMetrics {
    double l2 = 0.0;
    double sup = 0.0;
};
HeldoutMetrics heldout_metrics(const Slfn& net, const ComponentMap& target);

}  // namespace neurotwin
