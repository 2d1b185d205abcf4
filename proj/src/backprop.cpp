#include "neurotwin/backprop.hpp"

#include <cmath>
#include <stdexcept>

namespace neurotwin {

namespace {

struct ForwardScratch {
    std::vector<double> scaled;  // d
    std::vector<double> in;      // L, pre-activation
    std::vector<double> hidden;  // L
    std::vector<double> out;     // m
};

void forward_into(const Slfn& net, const double* x, ForwardScratch& s, long long* flops) {
    const std::size_t d = net.input_dim;
    const std::size_t L = net.hidden_count();
    const std::size_t m = net.output_dim;
    s.scaled.resize(d);
    s.in.resize(L);
    s.hidden.resize(L);
    s.out.assign(m, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        const double w = net.scale_hi[k] - net.scale_lo[k];
        s.scaled[k] = w > 0.0 ? 2.0 * (x[k] - net.scale_lo[k]) / w - 1.0 : x[k];
    }
    if (flops) *flops += 3 * static_cast<long long>(d);
    for (std::size_t i = 0; i < L; ++i) {
        double z = net.hidden_bias[i];
        for (std::size_t k = 0; k < d; ++k) z += net.hidden_weights[i * d + k] * s.scaled[k];
        s.in[i] = z;
        s.hidden[i] = activate(net.activation, z);
    }
    if (flops) *flops += static_cast<long long>(L) * (2 * static_cast<long long>(d) + 1);
    for (std::size_t o = 0; o < m; ++o) {
        double y = 0.0;
        for (std::size_t i = 0; i < L; ++i) y += net.output_weights[o * L + i] * s.hidden[i];
        s.out[o] = y;
    }
    if (flops) *flops += 2 * static_cast<long long>(m) * static_cast<long long>(L);
}

struct Deltas {
    std::vector<double> out;     // m, output-node deltas (linear output)
    std::vector<double> hidden;  // L
};

// Backward error pass against the current (pre-update) weights.
void deltas_into(const Slfn& net, const ForwardScratch& s, const double* target, Deltas& d,
                 long long* flops) {
    const std::size_t L = net.hidden_count();
    const std::size_t m = net.output_dim;
    d.out.resize(m);
    d.hidden.resize(L);
    for (std::size_t o = 0; o < m; ++o) d.out[o] = target[o] - s.out[o];
    if (flops) *flops += static_cast<long long>(m);
    for (std::size_t j = 0; j < L; ++j) {
        double err = 0.0;
        for (std::size_t o = 0; o < m; ++o) err += net.output_weights[o * L + j] * d.out[o];
        d.hidden[j] = activate_deriv(net.activation, s.in[j]) * err;
    }
    if (flops) {
        *flops += 2 * static_cast<long long>(m) * static_cast<long long>(L);
        *flops += 2 * static_cast<long long>(L);
    }
}

bool apply_updates(Slfn& net, const ForwardScratch& s, const Deltas& d, double alpha,
                   long long* flops) {
    const std::size_t dim = net.input_dim;
    const std::size_t L = net.hidden_count();
    const std::size_t m = net.output_dim;
    bool finite = true;
    for (std::size_t o = 0; o < m; ++o) {
        for (std::size_t i = 0; i < L; ++i) {
            double& w = net.output_weights[o * L + i];
            w += alpha * s.hidden[i] * d.out[o];
            finite = finite && std::isfinite(w);
        }
    }
    for (std::size_t j = 0; j < L; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
            double& w = net.hidden_weights[j * dim + k];
            w += alpha * s.scaled[k] * d.hidden[j];
            finite = finite && std::isfinite(w);
        }
        double& b = net.hidden_bias[j];
        b += alpha * 1.0 * d.hidden[j];
        finite = finite && std::isfinite(b);
    }
    if (flops) {
        *flops += 3 * static_cast<long long>(m) * static_cast<long long>(L);
        *flops += 3 * static_cast<long long>(L) * static_cast<long long>(dim);
        *flops += 3 * static_cast<long long>(L);
    }
    return finite;
}

double training_l2(const Slfn& net, const Dataset& data) {
    const std::size_t n = data.count();
    const double uniform = data.domain.volume() / static_cast<double>(n);
    ForwardScratch s;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        forward_into(net, data.inputs.data() + k * data.input_dim, s, nullptr);
        double e2 = 0.0;
        for (std::size_t o = 0; o < data.output_dim; ++o) {
            const double e = s.out[o] - data.targets[k * data.output_dim + o];
            e2 += e * e;
        }
        acc += (data.weights.empty() ? uniform : data.weights[k]) * e2;
    }
    return std::sqrt(acc);
}

}  // namespace

std::pair<Slfn, TrainReport> bp_train(Slfn net, const Dataset& data, double alpha,
                                      std::size_t epochs) {
    net.validate();
    data.validate();
    if (net.input_dim != data.input_dim || net.output_dim != data.output_dim) {
        throw std::invalid_argument("bp_train: net/dataset dimension mismatch");
    }
    if (!(alpha > 0.0)) throw std::invalid_argument("bp_train: alpha must be > 0");

    TrainReport report;
    report.method = "bp";
    report.activation = activation_name(net.activation);
    report.hidden_count = net.hidden_count();
    report.alpha = alpha;

    const std::size_t n = data.count();
    ForwardScratch scratch;
    Deltas deltas;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t k = 0; k < n; ++k) {
            forward_into(net, data.inputs.data() + k * data.input_dim, scratch,
                         &report.flop_count);
            deltas_into(net, scratch, data.targets.data() + k * data.output_dim, deltas,
                        &report.flop_count);
            if (!apply_updates(net, scratch, deltas, alpha, &report.flop_count)) {
                report.diverged = true;
                report.solve_status = "diverged";
                report.epochs = epoch + 1;
                report.final_l2 = -1.0;  // not computable on a diverged net
                return {std::move(net), report};
            }
        }
        report.epochs = epoch + 1;
    }
    report.final_l2 = training_l2(net, data);
    return {std::move(net), report};
}

double bp_gradient_check(const Slfn& net, const Dataset& data, double h) {
    data.validate();
    if (net.input_dim != data.input_dim || net.output_dim != data.output_dim) {
        throw std::invalid_argument("bp_gradient_check: net/dataset dimension mismatch");
    }
    if (!(h > 0.0)) throw std::invalid_argument("bp_gradient_check: h must be > 0");

    const std::size_t n = data.count();
    const std::size_t d = net.input_dim;
    const std::size_t L = net.hidden_count();
    const std::size_t m = net.output_dim;

    // Batch gradient of E = 1/2 sum (t - y)^2 from the backward pass: the
    // per-example weight increment is alpha * node_output * delta, so the
    // gradient entry is minus the accumulated increment over examples.
    std::vector<double> g_out(m * L, 0.0);
    std::vector<double> g_hidden(L * d, 0.0);
    std::vector<double> g_bias(L, 0.0);
    ForwardScratch s;
    Deltas dl;
    for (std::size_t k = 0; k < n; ++k) {
        forward_into(net, data.inputs.data() + k * d, s, nullptr);
        deltas_into(net, s, data.targets.data() + k * m, dl, nullptr);
        for (std::size_t o = 0; o < m; ++o) {
            for (std::size_t i = 0; i < L; ++i) g_out[o * L + i] -= s.hidden[i] * dl.out[o];
        }
        for (std::size_t j = 0; j < L; ++j) {
            for (std::size_t kk = 0; kk < d; ++kk) {
                g_hidden[j * d + kk] -= s.scaled[kk] * dl.hidden[j];
            }
            g_bias[j] -= dl.hidden[j];
        }
    }

    const auto loss = [&](const Slfn& candidate) {
        ForwardScratch sc;
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            forward_into(candidate, data.inputs.data() + k * d, sc, nullptr);
            for (std::size_t o = 0; o < m; ++o) {
                const double e = data.targets[k * m + o] - sc.out[o];
                acc += 0.5 * e * e;
            }
        }
        return acc;
    };

    std::vector<double*> slots;
    std::vector<double> analytic;
    Slfn probe = net;
    for (std::size_t i = 0; i < probe.output_weights.size(); ++i) {
        slots.push_back(&probe.output_weights[i]);
        analytic.push_back(g_out[i]);
    }
    for (std::size_t i = 0; i < probe.hidden_weights.size(); ++i) {
        slots.push_back(&probe.hidden_weights[i]);
        analytic.push_back(g_hidden[i]);
    }
    for (std::size_t i = 0; i < probe.hidden_bias.size(); ++i) {
        slots.push_back(&probe.hidden_bias[i]);
        analytic.push_back(g_bias[i]);
    }

    double scale = 0.0;
    for (double g : analytic) scale = std::max(scale, std::abs(g));

    double worst = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const double saved = *slots[i];
        *slots[i] = saved + h;
        const double up = loss(probe);
        *slots[i] = saved - h;
        const double down = loss(probe);
        *slots[i] = saved;
        const double fd = (up - down) / (2.0 * h);
        scale = std::max(scale, std::abs(fd));
        worst = std::max(worst, std::abs(fd - analytic[i]));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

long long bp_flops(std::size_t epochs, std::size_t samples, std::size_t input_dim,
                   std::size_t hidden_count, std::size_t output_dim) {
    const auto d = static_cast<long long>(input_dim);
    const auto L = static_cast<long long>(hidden_count);
    const auto m = static_cast<long long>(output_dim);
    const long long per_example = 3 * d + 5 * L * d + 6 * L + 7 * m * L + m;
    return static_cast<long long>(epochs) * static_cast<long long>(samples) * per_example;
}

}  // namespace neurotwin
