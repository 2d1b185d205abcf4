#include "neurotwin/train.hpp"

#include <cmath>
#include <stdexcept>

#include "neurotwin/backprop.hpp"
#include "neurotwin/elm.hpp"
#include "neurotwin/rng.hpp"
#include "neurotwin/smoothness.hpp"

namespace neurotwin {

TrainMethod train_method_from_name(const std::string& name) {
    if (name == "elm") return TrainMethod::elm;
    if (name == "bp") return TrainMethod::bp;
    throw std::invalid_argument("unknown training method: " + name);
}

std::string train_method_name(TrainMethod method) {
    return method == TrainMethod::elm ? "elm" : "bp";
}

namespace {

void check_domains(const Slfn& net, const ComponentMap& target) {
    if (net.input_dim != target.dims() || net.output_dim != 1) {
        throw std::invalid_argument("l2_error: net/map dimension mismatch");
    }
    for (std::size_t d = 0; d < target.dims(); ++d) {
        const double span = target.domain.width(d);
        if (std::abs(net.scale_lo[d] - target.domain.lo[d]) > 1e-9 * span ||
            std::abs(net.scale_hi[d] - target.domain.hi[d]) > 1e-9 * span) {
            throw std::invalid_argument("l2_error: domain mismatch in dimension " +
                                        std::to_string(d));
        }
    }
}

}  // namespace

double l2_error(const Slfn& net, const ComponentMap& target) {
    target.validate();
    check_domains(net, target);
    const std::size_t n = target.size();
    const double w = target.domain.volume() / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto x = target.point(k);
        const double e = forward(net, x)[0] - target.value[k];
        acc += w * e * e;
    }
    return std::sqrt(acc);
}

HeldoutMetrics heldout_metrics(const Slfn& net, const ComponentMap& target) {
    check_domains(net, target);
    const Dataset held = heldout_from_map(target);
    const std::size_t n = held.count();
    HeldoutMetrics metrics;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::span<const double> x(held.inputs.data() + k * held.input_dim, held.input_dim);
        const double e = forward(net, x)[0] - held.targets[k];
        acc += held.weights[k] * e * e;
        metrics.sup = std::max(metrics.sup, std::abs(e));
    }
    metrics.l2 = std::sqrt(acc);
    return metrics;
}

ToleranceResult train_to_tolerance(const ComponentMap& target, const ToleranceConfig& cfg) {
    target.validate();
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("train_to_tolerance: delta must be > 0");
    if (!detect_discontinuities(target).piecewise_continuous) {
        throw std::invalid_argument("train_to_tolerance: target failed the piecewise-continuity "
                                    "certificate");
    }

    const Dataset train = dataset_from_map(target);
    ToleranceResult best;
    bool have_best = false;
    double best_l2 = 0.0;

    const auto consider = [&](Slfn net, TrainReport report) {
        const HeldoutMetrics metrics = heldout_metrics(net, target);
        report.heldout_l2 = metrics.l2;
        report.heldout_sup = metrics.sup;
        report.delta = cfg.delta;
        report.tolerance_met = metrics.l2 < cfg.delta;
        if (!have_best || metrics.l2 < best_l2) {
            best_l2 = metrics.l2;
            best.net = std::move(net);
            best.report = report;
            have_best = true;
        }
        return report.tolerance_met;
    };

    if (cfg.method == TrainMethod::elm) {
        if (cfg.budget < 1) throw std::invalid_argument("train_to_tolerance: zero budget");
        std::size_t L = std::min<std::size_t>(8, cfg.budget);
        while (true) {
            auto [net, report] = elm_train(train, L, cfg.activation, cfg.ridge, cfg.seed);
            if (consider(std::move(net), report)) break;
            if (L >= cfg.budget) break;
            L = std::min(L * 2, cfg.budget);
        }
    } else {
        Slfn net = elm_random_hidden(train.input_dim, train.output_dim, cfg.bp_hidden,
                                     cfg.activation, train.domain, cfg.seed,
                                     /*multiscale=*/false);
        const SplitRng rng = SplitRng(cfg.seed).split("bp-init-beta");
        const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.bp_hidden));
        for (std::size_t i = 0; i < net.output_weights.size(); ++i) {
            net.output_weights[i] = scale * rng.uniform_pm1_at(i);
        }
        const std::size_t chunk = std::max<std::size_t>(1, cfg.budget / 16);
        std::size_t done = 0;
        long long flops = 0;
        while (done < cfg.budget) {
            const std::size_t step = std::min(chunk, cfg.budget - done);
            auto [trained, report] = bp_train(std::move(net), train, cfg.alpha, step);
            net = std::move(trained);
            done += report.epochs;
            flops += report.flop_count;
            report.epochs = done;
            report.flop_count = flops;
            report.seed = cfg.seed;
            const bool met = consider(net, report);
            if (met || report.diverged) break;
        }
    }

    if (!have_best) throw std::invalid_argument("train_to_tolerance: budget allows no run");
    best.report.delta = cfg.delta;
    best.report.method = train_method_name(cfg.method);
    return best;
}

}  // namespace neurotwin
