#pragma once

#include <vector>

namespace neurotwin {

// Squid-axon membrane constants in the modern sign convention (rest near
// -65 mV). Units: uF/cm^2, mS/cm^2, mV. Kept in one record so an alternate
// parameter set can be swapped in wholesale.
struct HHParams {
    double c_m = 1.0;
    double g_na = 120.0;
    double g_k = 36.0;
    double g_leak = 0.3;
    double e_na = 50.0;
    double e_k = -77.0;
    double e_leak = -54.387;

    void validate() const;
};

struct HHState {
    double v = -65.0;  // membrane voltage, mV
    double m = 0.0;    // gating variables, dimensionless in [0,1]
    double h = 0.0;
    double n = 0.0;

    void validate() const;
};

// Gating rate constants (1/ms) as functions of voltage.
double hh_alpha_m(double v);
double hh_beta_m(double v);
double hh_alpha_h(double v);
double hh_beta_h(double v);
double hh_alpha_n(double v);
double hh_beta_n(double v);

// State with gating variables at their steady-state values for v.
HHState hh_steady_state(double v = -65.0);

// One fixed-step RK4 step of the four coupled ODEs
//   c_m dv/dt = i_ext - i_ion(v, m, h, n)
// plus the three gating equations. Gating variables are clamped to [0,1]
// after the step. dt in ms, i_ext in uA/cm^2.
HHState hh_step(const HHState& state, const HHParams& params, double i_ext, double dt);

struct VoltageTrace {
    std::vector<double> v;  // sample k is the voltage after k steps
    double dt = 0.0;
};

VoltageTrace hh_simulate(HHState state, const HHParams& params, double i_ext,
                         double t_total, double dt);

// Upward crossings of `threshold` with a refractory lockout between
// detections. Crossing times are linearly interpolated within the step.
std::vector<double> spike_times(const VoltageTrace& trace, double threshold = 0.0,
                                double refractory_ms = 2.0);

// Peak voltage reached after each detected crossing (until the trace falls
// back below threshold).
std::vector<double> spike_peaks(const VoltageTrace& trace, double threshold = 0.0,
                                double refractory_ms = 2.0);

// Pulse train of the all-or-none readout: `amplitude` at samples where an
// upward threshold crossing lands, 0 elsewhere. Output takes exactly the
// two values {0, amplitude}.
std::vector<double> all_or_none_readout(const std::vector<double>& v_trace,
                                        double threshold, double amplitude);

}  // namespace neurotwin
