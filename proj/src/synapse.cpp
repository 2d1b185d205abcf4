#include "neurotwin/synapse.hpp"

#include <cmath>
#include <stdexcept>

namespace neurotwin {

void SynapseParams::validate() const {
    if (!std::isfinite(amplitude) || !std::isfinite(slope) || !std::isfinite(midpoint) ||
        !std::isfinite(p) || !std::isfinite(delay)) {
        throw std::invalid_argument("SynapseParams: non-finite field");
    }
    if (amplitude < 0.0) throw std::invalid_argument("SynapseParams.amplitude must be >= 0");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("SynapseParams.p must be in [0,1]");
    if (delay < 0.0) throw std::invalid_argument("SynapseParams.delay must be >= 0");
}

double synapse_value(const SynapseParams& params, double x) {
    return params.amplitude / (1.0 + std::exp(-params.slope * (x - params.midpoint)));
}

ComponentMap synapse_map(const SynapseParams& params, const Box& domain,
                         std::size_t resolution) {
    params.validate();
    domain.validate();
    if (domain.dims() != 1) throw std::invalid_argument("synapse_map: domain must be 1-D");
    if (resolution < 2) throw std::invalid_argument("synapse_map: empty or degenerate grid");

    const SynapseParams captured = params;
    ComponentMap map = sample_map1(domain.lo[0], domain.hi[0], resolution,
                                   [captured](double x) { return synapse_value(captured, x); });
    map.probability.assign(map.size(), params.p);
    map.delay.assign(map.size(), params.delay);
    map.validate();
    return map;
}

}  // namespace neurotwin
