#include "neurotwin/hodgkin_huxley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace neurotwin {

void HHParams::validate() const {
    const struct {
        const char* name;
        double v;
    } fields[] = {{"c_m", c_m},   {"g_na", g_na}, {"g_k", g_k},       {"g_leak", g_leak},
                  {"e_na", e_na}, {"e_k", e_k},   {"e_leak", e_leak}};
    for (const auto& f : fields) {
        if (!std::isfinite(f.v)) {
            throw std::invalid_argument(std::string("HHParams.") + f.name + " is not finite");
        }
    }
    if (!(c_m > 0.0)) throw std::invalid_argument("HHParams.c_m must be > 0");
    if (g_na < 0.0) throw std::invalid_argument("HHParams.g_na must be >= 0");
    if (g_k < 0.0) throw std::invalid_argument("HHParams.g_k must be >= 0");
    if (g_leak < 0.0) throw std::invalid_argument("HHParams.g_leak must be >= 0");
}

void HHState::validate() const {
    const struct {
        const char* name;
        double x;
    } fields[] = {{"v", v}, {"m", m}, {"h", h}, {"n", n}};
    for (const auto& f : fields) {
        if (!std::isfinite(f.x)) {
            throw std::invalid_argument(std::string("HHState.") + f.name + " is not finite");
        }
    }
    if (m < 0.0 || m > 1.0) throw std::invalid_argument("HHState.m outside [0,1]");
    if (h < 0.0 || h > 1.0) throw std::invalid_argument("HHState.h outside [0,1]");
    if (n < 0.0 || n > 1.0) throw std::invalid_argument("HHState.n outside [0,1]");
}

namespace {

// x / (1 - exp(-x/s)) with the removable singularity at x = 0 filled in.
double vtrap(double x, double s) {
    if (std::abs(x / s) < 1e-6) return s * (1.0 - x / (2.0 * s));
    return x / (std::exp(x / s) - 1.0);
}

}  // namespace

double hh_alpha_m(double v) { return 0.1 * vtrap(-(v + 40.0), 10.0); }
double hh_beta_m(double v) { return 4.0 * std::exp(-(v + 65.0) / 18.0); }
double hh_alpha_h(double v) { return 0.07 * std::exp(-(v + 65.0) / 20.0); }
double hh_beta_h(double v) { return 1.0 / (1.0 + std::exp(-(v + 35.0) / 10.0)); }
double hh_alpha_n(double v) { return 0.01 * vtrap(-(v + 55.0), 10.0); }
double hh_beta_n(double v) { return 0.125 * std::exp(-(v + 65.0) / 80.0); }

HHState hh_steady_state(double v) {
    HHState s;
    s.v = v;
    s.m = hh_alpha_m(v) / (hh_alpha_m(v) + hh_beta_m(v));
    s.h = hh_alpha_h(v) / (hh_alpha_h(v) + hh_beta_h(v));
    s.n = hh_alpha_n(v) / (hh_alpha_n(v) + hh_beta_n(v));
    return s;
}

namespace {

struct Derivs {
    double dv, dm, dh, dn;
};

Derivs hh_rhs(const HHState& s, const HHParams& p, double i_ext) {
    const double i_na = p.g_na * s.m * s.m * s.m * s.h * (s.v - p.e_na);
    const double i_k = p.g_k * s.n * s.n * s.n * s.n * (s.v - p.e_k);
    const double i_leak = p.g_leak * (s.v - p.e_leak);
    Derivs d;
    d.dv = (i_ext - i_na - i_k - i_leak) / p.c_m;
    d.dm = hh_alpha_m(s.v) * (1.0 - s.m) - hh_beta_m(s.v) * s.m;
    d.dh = hh_alpha_h(s.v) * (1.0 - s.h) - hh_beta_h(s.v) * s.h;
    d.dn = hh_alpha_n(s.v) * (1.0 - s.n) - hh_beta_n(s.v) * s.n;
    return d;
}

HHState advance(const HHState& s, const Derivs& d, double dt) {
    return HHState{s.v + dt * d.dv, s.m + dt * d.dm, s.h + dt * d.dh, s.n + dt * d.dn};
}

}  // namespace

HHState hh_step(const HHState& state, const HHParams& params, double i_ext, double dt) {
    state.validate();
    params.validate();
    if (!std::isfinite(i_ext)) throw std::invalid_argument("hh_step: i_ext is not finite");
    if (!(dt >= 0.0)) throw std::invalid_argument("hh_step: dt must be >= 0");
    if (dt == 0.0) return state;

    const Derivs k1 = hh_rhs(state, params, i_ext);
    const Derivs k2 = hh_rhs(advance(state, k1, 0.5 * dt), params, i_ext);
    const Derivs k3 = hh_rhs(advance(state, k2, 0.5 * dt), params, i_ext);
    const Derivs k4 = hh_rhs(advance(state, k3, dt), params, i_ext);

    HHState out;
    out.v = state.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    out.m = state.m + dt / 6.0 * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm);
    out.h = state.h + dt / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
    out.n = state.n + dt / 6.0 * (k1.dn + 2.0 * k2.dn + 2.0 * k3.dn + k4.dn);
    out.m = std::clamp(out.m, 0.0, 1.0);
    out.h = std::clamp(out.h, 0.0, 1.0);
    out.n = std::clamp(out.n, 0.0, 1.0);
    return out;
}

VoltageTrace hh_simulate(HHState state, const HHParams& params, double i_ext,
                         double t_total, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("hh_simulate: dt must be > 0");
    const auto steps = static_cast<std::size_t>(std::llround(t_total / dt));
    VoltageTrace trace;
    trace.dt = dt;
    trace.v.reserve(steps + 1);
    trace.v.push_back(state.v);
    for (std::size_t k = 0; k < steps; ++k) {
        state = hh_step(state, params, i_ext, dt);
        trace.v.push_back(state.v);
    }
    return trace;
}

std::vector<double> spike_times(const VoltageTrace& trace, double threshold,
                                double refractory_ms) {
    std::vector<double> times;
    double last = -1e300;
    for (std::size_t k = 1; k < trace.v.size(); ++k) {
        if (trace.v[k - 1] < threshold && trace.v[k] >= threshold) {
            const double frac = (threshold - trace.v[k - 1]) / (trace.v[k] - trace.v[k - 1]);
            const double t = (static_cast<double>(k - 1) + frac) * trace.dt;
            if (t - last >= refractory_ms) {
                times.push_back(t);
                last = t;
            }
        }
    }
    return times;
}

std::vector<double> spike_peaks(const VoltageTrace& trace, double threshold,
                                double refractory_ms) {
    std::vector<double> peaks;
    double last = -1e300;
    std::size_t k = 1;
    while (k < trace.v.size()) {
        if (trace.v[k - 1] < threshold && trace.v[k] >= threshold) {
            const double frac = (threshold - trace.v[k - 1]) / (trace.v[k] - trace.v[k - 1]);
            const double t = (static_cast<double>(k - 1) + frac) * trace.dt;
            if (t - last >= refractory_ms) {
                last = t;
                double peak = trace.v[k];
                std::size_t j = k;
                while (j + 1 < trace.v.size() && trace.v[j + 1] >= threshold) {
                    ++j;
                    peak = std::max(peak, trace.v[j]);
                }
                peaks.push_back(peak);
                k = j + 1;
                continue;
            }
        }
        ++k;
    }
    return peaks;
}

std::vector<double> all_or_none_readout(const std::vector<double>& v_trace,
                                        double threshold, double amplitude) {
    for (double v : v_trace) {
        if (!std::isfinite(v)) throw std::invalid_argument("all_or_none_readout: non-finite trace");
    }
    std::vector<double> train(v_trace.size(), 0.0);
    for (std::size_t k = 1; k < v_trace.size(); ++k) {
        if (v_trace[k - 1] < threshold && v_trace[k] >= threshold) train[k] = amplitude;
    }
    return train;
}

}  // namespace neurotwin
