#include "neurotwin/elm.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "neurotwin/rng.hpp"

namespace neurotwin {

Slfn elm_random_hidden(std::size_t input_dim, std::size_t output_dim, std::size_t hidden_count,
                       Activation activation, const Box& domain, std::uint64_t seed,
                       bool multiscale) {
    if (hidden_count < 1) throw std::invalid_argument("elm: hidden_count must be >= 1");
    Slfn net;
    net.input_dim = input_dim;
    net.output_dim = output_dim;
    net.activation = activation;
    net.scale_lo = domain.lo;
    net.scale_hi = domain.hi;
    net.hidden_weights.resize(hidden_count * input_dim);
    net.hidden_bias.resize(hidden_count);
    net.output_weights.assign(output_dim * hidden_count, 0.0);

    // Base draws are uniform on [-1, 1] over unit-box inputs; a deterministic
    // dyadic scale ladder (1, 2, ..., 128, cycling with the node index) mixes
    // in sharp nodes, without which bounded-slope features cannot localize
    // around corners. Node i depends only on (seed, i), so feature sets nest.
    const SplitRng rng = SplitRng(seed).split("elm-hidden");
    for (std::size_t i = 0; i < hidden_count; ++i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * (input_dim + 1);
        const double scale = multiscale ? static_cast<double>(1u << (i % 8)) : 1.0;
        for (std::size_t d = 0; d < input_dim; ++d) {
            net.hidden_weights[i * input_dim + d] = scale * rng.uniform_pm1_at(base + d);
        }
        net.hidden_bias[i] = scale * rng.uniform_pm1_at(base + input_dim);
    }
    net.validate();
    return net;
}

namespace {

double weighted_l2(const Dataset& data, const Eigen::MatrixXd& residual) {
    // discrete L2: sqrt(sum_k w_k |r_k|^2), uniform midpoint weights if absent
    const std::size_t n = data.count();
    const double uniform = data.domain.volume() / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = data.weights.empty() ? uniform : data.weights[k];
        acc += w * residual.row(static_cast<Eigen::Index>(k)).squaredNorm();
    }
    return std::sqrt(acc);
}

}  // namespace

std::pair<Slfn, TrainReport> elm_train(const Dataset& data, std::size_t hidden_count,
                                       Activation activation, double ridge,
                                       std::uint64_t seed) {
    data.validate();
    if (ridge < 0.0) throw std::invalid_argument("elm: ridge must be >= 0");
    if (activation == Activation::linear) {
        throw std::invalid_argument("elm: activation must be logistic or tanh");
    }

    Slfn net = elm_random_hidden(data.input_dim, data.output_dim, hidden_count, activation,
                                 data.domain, seed);

    const auto n = static_cast<Eigen::Index>(data.count());
    const auto L = static_cast<Eigen::Index>(hidden_count);
    const auto m = static_cast<Eigen::Index>(data.output_dim);
    const auto d = static_cast<Eigen::Index>(data.input_dim);

    Eigen::MatrixXd H(n, L);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < L; ++i) {
            double z = net.hidden_bias[static_cast<std::size_t>(i)];
            for (Eigen::Index dd = 0; dd < d; ++dd) {
                const double lo = net.scale_lo[static_cast<std::size_t>(dd)];
                const double hi = net.scale_hi[static_cast<std::size_t>(dd)];
                const double x = data.inputs[static_cast<std::size_t>(k * d + dd)];
                const double scaled = hi > lo ? 2.0 * (x - lo) / (hi - lo) - 1.0 : x;
                z += net.hidden_weights[static_cast<std::size_t>(i * d + dd)] * scaled;
            }
            H(k, i) = activate(activation, z);
        }
    }
    Eigen::MatrixXd T(n, m);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index o = 0; o < m; ++o) {
            T(k, o) = data.targets[static_cast<std::size_t>(k * m + o)];
        }
    }

    TrainReport report;
    report.method = "elm";
    report.activation = activation_name(activation);
    report.seed = seed;
    report.hidden_count = hidden_count;
    report.ridge = ridge;
    report.flop_count = elm_flop_estimate(data.count(), data.input_dim, hidden_count,
                                          data.output_dim);

    Eigen::MatrixXd beta;
    if (ridge > 0.0) {
        Eigen::MatrixXd gram = H.transpose() * H;
        gram.diagonal().array() += ridge;
        beta = gram.ldlt().solve(H.transpose() * T);
        report.solve_status = "ridge";
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
        beta = svd.solve(T);  // minimum-norm least squares
        report.rank_deficient = svd.rank() < L;  // normal system H^T H is L x L
        report.solve_status = report.rank_deficient ? "min-norm" : "ok";
    }

    for (Eigen::Index o = 0; o < m; ++o) {
        for (Eigen::Index i = 0; i < L; ++i) {
            net.output_weights[static_cast<std::size_t>(o * L + i)] = beta(i, o);
        }
    }
    report.final_l2 = weighted_l2(data, Eigen::MatrixXd(H * beta - T));
    return {std::move(net), report};
}

long long elm_flop_estimate(std::size_t samples, std::size_t input_dim,
                            std::size_t hidden_count, std::size_t output_dim) {
    // H build: N*L*(2d+2); gram: N*L^2; factorization: L^3/3; rhs+solve:
    // 2*N*L*m + 2*L^2*m. Estimate only; see bp_flops for the exact tally.
    const auto n = static_cast<long long>(samples);
    const auto d = static_cast<long long>(input_dim);
    const auto L = static_cast<long long>(hidden_count);
    const auto m = static_cast<long long>(output_dim);
    return n * L * (2 * d + 2) + n * L * L + L * L * L / 3 + 2 * n * L * m + 2 * L * L * m;
}

}  // namespace neurotwin
