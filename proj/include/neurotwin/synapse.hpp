#pragma once

#include "neurotwin/component_map.hpp"

namespace neurotwin {

// Saturating neurotransmission curve with a transmission probability and a
// whole-step transmission delay.
struct SynapseParams {
    double amplitude = 1.0;
    double slope = 1.0;
    double midpoint = 0.0;
    double p = 1.0;       // transmission probability
    double delay = 0.0;   // time steps, >= 0

    void validate() const;
};

// amplitude * sigmoid(slope * (x - midpoint))
double synapse_value(const SynapseParams& params, double x);

// Continuous map with value channel synapse_value, constant probability and
// delay channels, and the closed form attached as evaluator.
ComponentMap synapse_map(const SynapseParams& params, const Box& domain,
                         std::size_t resolution);

}  // namespace neurotwin
