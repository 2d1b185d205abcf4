#include "neurotwin/rate_map.hpp"

#include <cmath>
#include <stdexcept>

namespace neurotwin {

namespace {

double resolved_dt(const NeuronParams& params, const RateMapConfig& cfg) {
    if (cfg.dt > 0.0) return cfg.dt;
    return std::holds_alternative<HHParams>(params) ? 0.01 : 0.005;
}

std::size_t count_crossings(const std::vector<double>& v, std::size_t first, double threshold,
                            std::size_t lockout_steps) {
    std::size_t count = 0;
    std::size_t last = 0;
    bool have_last = false;
    for (std::size_t k = first + 1; k < v.size(); ++k) {
        if (v[k - 1] < threshold && v[k] >= threshold) {
            if (!have_last || k - last >= lockout_steps) {
                ++count;
                last = k;
                have_last = true;
            }
        }
    }
    return count;
}

}  // namespace

double firing_rate(const NeuronParams& params, double current, const RateMapConfig& cfg) {
    if (!(cfg.window_ms > 0.0)) throw std::invalid_argument("firing_rate: window must be > 0");
    const double dt = resolved_dt(params, cfg);
    const double t_total = cfg.discard_ms + cfg.window_ms;
    const auto first = static_cast<std::size_t>(std::llround(cfg.discard_ms / dt));

    if (const auto* hh = std::get_if<HHParams>(&params)) {
        const VoltageTrace trace = hh_simulate(hh_steady_state(), *hh, current, t_total, dt);
        const auto lockout = static_cast<std::size_t>(std::llround(cfg.refractory_ms / dt));
        const std::size_t count = count_crossings(trace.v, first, cfg.threshold, lockout);
        return static_cast<double>(count) / cfg.window_ms;
    }
    const auto& lif = std::get<LIFParams>(params);
    const std::vector<double> trace = lif_simulate(lif, current, t_total, dt, lif.v_reset);
    const std::size_t count = count_crossings(trace, first, lif.theta, 0);
    return static_cast<double>(count) / cfg.window_ms;
}

RateMapResult firing_rate_map(const NeuronParams& params, const Box& domain,
                              std::size_t resolution, const RateMapConfig& cfg) {
    domain.validate();
    if (domain.dims() != 1) throw std::invalid_argument("firing_rate_map: domain must be 1-D");
    if (resolution < 2) throw std::invalid_argument("firing_rate_map: need >= 2 grid currents");
    if (!(cfg.window_ms > 0.0)) throw std::invalid_argument("firing_rate_map: window must be > 0");

    RateMapResult result;
    ComponentMap& map = result.map;
    map.domain = domain;
    map.shape = {resolution};
    map.value.resize(resolution, 0.0);

    for (std::size_t k = 0; k < resolution; ++k) {
        const double current = map.coord(0, k);
        double rate = 0.0;
        bool ok = true;
        try {
            rate = firing_rate(params, current, cfg);
        } catch (const std::invalid_argument&) {
            ok = false;  // non-finite state mid-run surfaces as a validation failure
        }
        if (!ok || !std::isfinite(rate)) {
            result.excluded.push_back(k);
            map.value[k] = 0.0;
        } else {
            map.value[k] = rate;
        }
    }

    const NeuronParams captured_params = params;
    const RateMapConfig captured_cfg = cfg;
    map.evaluator = [captured_params, captured_cfg](std::span<const double> x) {
        return firing_rate(captured_params, x[0], captured_cfg);
    };
    map.validate();
    return result;
}

}  // namespace neurotwin
