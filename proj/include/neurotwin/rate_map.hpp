#pragma once

#include <variant>
#include <vector>

#include "neurotwin/component_map.hpp"
#include "neurotwin/hodgkin_huxley.hpp"
#include "neurotwin/lif.hpp"

namespace neurotwin {

using NeuronParams = std::variant<HHParams, LIFParams>;

struct RateMapConfig {
    double window_ms = 200.0;   // measurement window after the transient
    double discard_ms = 50.0;   // transient discarded before counting
    double dt = 0.0;            // 0 = per-kind default (HH 0.01, LIF 0.005)
    double threshold = 0.0;     // spike threshold; LIF uses theta regardless
    double refractory_ms = 2.0; // HH crossing lockout
};

struct RateMapResult {
    ComponentMap map;                   // rate channel over the current grid
    std::vector<std::size_t> excluded;  // grid indices dropped for divergence
};

// Static f-I map of a dynamic neuron: for each grid current, simulate over
// discard + window, count upward threshold crossings after the transient,
// rate = count / window (spikes per ms). Diverging grid points are excluded
// and reported. The returned map carries a simulate-on-demand evaluator.
RateMapResult firing_rate_map(const NeuronParams& params, const Box& domain,
                              std::size_t resolution, const RateMapConfig& cfg = {});

// Single-current rate extraction used by the map builder.
double firing_rate(const NeuronParams& params, double current, const RateMapConfig& cfg = {});

}  // namespace neurotwin
