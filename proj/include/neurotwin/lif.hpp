#pragma once

#include <vector>

namespace neurotwin {

// Leaky integrate-and-fire component. tau in ms; theta and v_reset in the
// same units as the input drive.
struct LIFParams {
    double tau = 1.0;
    double theta = 1.0;
    double v_reset = 0.0;

    void validate() const;
};

// Closed-form f-I curve: 0 for i <= theta (the boundary included), and
// 1 / (tau * ln(i / (i - theta))) above. Units: spikes per ms.
double lif_rate(const LIFParams& params, double i);

// Membrane trace under constant drive, exact exponential stepping
//   v <- i + (v - i) * exp(-dt / tau)
// with reset to v_reset at the first sample at or above theta.
std::vector<double> lif_simulate(const LIFParams& params, double i, double t_total,
                                 double dt, double v0 = 0.0);

}  // namespace neurotwin
