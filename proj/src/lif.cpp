#include "neurotwin/lif.hpp"

#include <cmath>
#include <stdexcept>

namespace neurotwin {

void LIFParams::validate() const {
    if (!std::isfinite(tau) || !std::isfinite(theta) || !std::isfinite(v_reset)) {
        throw std::invalid_argument("LIFParams: non-finite field");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("LIFParams.tau must be > 0");
    if (!(theta > 0.0)) throw std::invalid_argument("LIFParams.theta must be > 0");
}

double lif_rate(const LIFParams& params, double i) {
    params.validate();
    if (!std::isfinite(i)) throw std::invalid_argument("lif_rate: input not finite");
    if (i <= params.theta) return 0.0;
    return 1.0 / (params.tau * std::log(i / (i - params.theta)));
}

std::vector<double> lif_simulate(const LIFParams& params, double i, double t_total,
                                 double dt, double v0) {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("lif_simulate: dt must be > 0");
    const auto steps = static_cast<std::size_t>(std::llround(t_total / dt));
    std::vector<double> trace;
    trace.reserve(steps + 1);
    double v = v0;
    trace.push_back(v);
    for (std::size_t k = 0; k < steps; ++k) {
        // exponential update with exact in-step reset handling: when the
        // trajectory reaches theta inside the step, reset at the crossing
        // time and evolve the remainder, so spike periods carry no grid bias
        double remaining = dt;
        double next = i + (v - i) * std::exp(-remaining / params.tau);
        bool fired = false;
        for (int guard = 0; guard < 64 && next >= params.theta && i > params.theta; ++guard) {
            fired = true;
            const double s = params.tau * std::log((i - v) / (i - params.theta));
            remaining -= s;
            v = params.v_reset;
            next = i + (v - i) * std::exp(-remaining / params.tau);
        }
        if (!fired && next >= params.theta) {
            // non-repeating crossing (i <= theta can still cross from v0)
            trace.push_back(next);
            v = params.v_reset;
            continue;
        }
        if (fired) {
            // record a suprathreshold sample so crossing counters see the spike
            trace.push_back(params.theta);
            v = next;
            continue;
        }
        v = next;
        trace.push_back(v);
    }
    return trace;
}

}  // namespace neurotwin
