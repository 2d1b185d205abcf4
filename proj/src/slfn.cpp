#include "neurotwin/slfn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace neurotwin {

using json = nlohmann::ordered_json;

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::logistic: return "logistic";
        case Activation::tanh: return "tanh";
        case Activation::linear: return "linear";
    }
    throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "logistic") return Activation::logistic;
    if (name == "tanh") return Activation::tanh;
    if (name == "linear") return Activation::linear;
    throw std::invalid_argument("unknown activation: " + name);
}

double activate(Activation a, double x) {
    switch (a) {
        case Activation::logistic: return 1.0 / (1.0 + std::exp(-x));
        case Activation::tanh: return std::tanh(x);
        case Activation::linear: return x;
    }
    throw std::invalid_argument("unknown activation");
}

double activate_deriv(Activation a, double x) {
    switch (a) {
        case Activation::logistic: {
            const double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 - s);
        }
        case Activation::tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Activation::linear: return 1.0;
    }
    throw std::invalid_argument("unknown activation");
}

void Slfn::validate() const {
    if (activation == Activation::linear) {
        throw std::invalid_argument("Slfn.activation must be bounded and nonconstant "
                                    "(logistic or tanh)");
    }
    if (input_dim == 0 || output_dim == 0) throw std::invalid_argument("Slfn: zero dimension");
    const std::size_t L = hidden_count();
    if (L < 1) throw std::invalid_argument("Slfn: hidden count must be >= 1");
    if (hidden_weights.size() != L * input_dim) {
        throw std::invalid_argument("Slfn: hidden_weights size mismatch");
    }
    if (output_weights.size() != output_dim * L) {
        throw std::invalid_argument("Slfn: output_weights size mismatch");
    }
    if (scale_lo.size() != input_dim || scale_hi.size() != input_dim) {
        throw std::invalid_argument("Slfn: input scaling size mismatch");
    }
    const auto all_finite = [](const std::vector<double>& v) {
        for (double x : v) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    };
    if (!all_finite(hidden_weights) || !all_finite(hidden_bias) || !all_finite(output_weights) ||
        !all_finite(scale_lo) || !all_finite(scale_hi)) {
        throw std::invalid_argument("Slfn: non-finite parameter");
    }
}

std::vector<double> forward(const Slfn& net, std::span<const double> x) {
    if (x.size() != net.input_dim) throw std::invalid_argument("forward: input dimension mismatch");
    const std::size_t L = net.hidden_count();
    std::vector<double> scaled(net.input_dim);
    for (std::size_t d = 0; d < net.input_dim; ++d) {
        const double w = net.scale_hi[d] - net.scale_lo[d];
        scaled[d] = w > 0.0 ? 2.0 * (x[d] - net.scale_lo[d]) / w - 1.0 : x[d];
    }
    std::vector<double> out(net.output_dim, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
        double z = net.hidden_bias[i];
        for (std::size_t d = 0; d < net.input_dim; ++d) {
            z += net.hidden_weights[i * net.input_dim + d] * scaled[d];
        }
        const double h = activate(net.activation, z);
        for (std::size_t o = 0; o < net.output_dim; ++o) {
            out[o] += net.output_weights[o * L + i] * h;
        }
    }
    return out;
}

double forward1(const Slfn& net, double x) {
    const double xs[1] = {x};
    return forward(net, xs)[0];
}

std::string slfn_to_json(const Slfn& net) {
    json j;
    j["schema_version"] = 1;
    j["activation"] = activation_name(net.activation);
    j["input_dim"] = net.input_dim;
    j["output_dim"] = net.output_dim;
    j["hidden_count"] = net.hidden_count();
    j["hidden_weights"] = net.hidden_weights;
    j["hidden_bias"] = net.hidden_bias;
    j["output_weights"] = net.output_weights;
    j["scale_lo"] = net.scale_lo;
    j["scale_hi"] = net.scale_hi;
    return j.dump(2);
}

Slfn slfn_from_json(const std::string& text) {
    const json j = json::parse(text);
    Slfn net;
    net.activation = activation_from_name(j.at("activation").get<std::string>());
    net.input_dim = j.at("input_dim").get<std::size_t>();
    net.output_dim = j.at("output_dim").get<std::size_t>();
    net.hidden_weights = j.at("hidden_weights").get<std::vector<double>>();
    net.hidden_bias = j.at("hidden_bias").get<std::vector<double>>();
    net.output_weights = j.at("output_weights").get<std::vector<double>>();
    net.scale_lo = j.at("scale_lo").get<std::vector<double>>();
    net.scale_hi = j.at("scale_hi").get<std::vector<double>>();
    net.validate();
    return net;
}

void save_slfn_json(const Slfn& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << slfn_to_json(net);
}

Slfn load_slfn_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return slfn_from_json(ss.str());
}

void Dataset::validate() const {
    domain.validate();
    if (input_dim != domain.dims()) throw std::invalid_argument("Dataset: input_dim mismatch");
    if (output_dim == 0) throw std::invalid_argument("Dataset: output_dim must be >= 1");
    if (inputs.empty()) throw std::invalid_argument("Dataset: empty");
    if (inputs.size() % input_dim != 0) throw std::invalid_argument("Dataset: ragged inputs");
    const std::size_t n = count();
    if (targets.size() != n * output_dim) throw std::invalid_argument("Dataset: target size mismatch");
    if (!weights.empty() && weights.size() != n) {
        throw std::invalid_argument("Dataset: weight size mismatch");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!domain.contains(std::span<const double>(inputs.data() + k * input_dim, input_dim),
                             1e-12)) {
            throw std::invalid_argument("Dataset: input " + std::to_string(k) + " outside domain");
        }
    }
}

Dataset dataset_from_map(const ComponentMap& map) {
    map.validate();
    Dataset data;
    data.domain = map.domain;
    data.input_dim = map.dims();
    data.output_dim = 1;
    const std::size_t n = map.size();
    data.inputs.reserve(n * data.input_dim);
    data.targets.reserve(n);
    const double w = map.domain.volume() / static_cast<double>(n);
    data.weights.assign(n, w);
    for (std::size_t k = 0; k < n; ++k) {
        for (double c : map.point(k)) data.inputs.push_back(c);
        data.targets.push_back(map.value[k]);
    }
    data.validate();
    return data;
}

Dataset heldout_from_map(const ComponentMap& map) {
    map.validate();
    Dataset data;
    data.domain = map.domain;
    data.input_dim = map.dims();
    data.output_dim = 1;
    const std::size_t n = map.size();
    const double w = map.domain.volume() / static_cast<double>(n);
    data.weights.assign(n, w);
    for (std::size_t k = 0; k < n; ++k) {
        auto x = map.point(k);
        // shift by half a cell; the last point lands on the domain edge
        for (std::size_t d = 0; d < x.size(); ++d) {
            x[d] = std::min(x[d] + 0.5 * map.cell_width(d), map.domain.hi[d]);
        }
        for (double c : x) data.inputs.push_back(c);
        data.targets.push_back(map.eval(x));
    }
    data.validate();
    return data;
}

std::string train_report_to_json(const TrainReport& report) {
    json j;
    j["schema_version"] = 1;
    j["method"] = report.method;
    j["activation"] = report.activation;
    j["seed"] = report.seed;
    j["hidden_count"] = report.hidden_count;
    j["epochs"] = report.epochs;
    j["ridge"] = report.ridge;
    j["alpha"] = report.alpha;
    j["delta"] = report.delta;
    j["final_l2"] = report.final_l2;
    j["heldout_l2"] = report.heldout_l2;
    j["heldout_sup"] = report.heldout_sup;
    j["solve_status"] = report.solve_status;
    j["rank_deficient"] = report.rank_deficient;
    j["diverged"] = report.diverged;
    j["tolerance_met"] = report.tolerance_met;
    j["flop_count"] = report.flop_count;
    return j.dump(2);
}

}  // namespace neurotwin
