#include "neurotwin/twin.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "neurotwin/rng.hpp"
#include "neurotwin/smoothness.hpp"

namespace neurotwin {

using json = nlohmann::ordered_json;

double lipschitz_estimate(const ComponentMap& map, bool fold_probability) {
    map.validate();
    std::vector<double> effective = map.value;
    if (fold_probability && !map.probability.empty()) {
        for (std::size_t k = 0; k < effective.size(); ++k) effective[k] *= map.probability[k];
    }
    double max_slope = 0.0;
    if (map.dims() == 1) {
        const double h = map.cell_width(0);
        for (std::size_t k = 0; k + 1 < effective.size(); ++k) {
            max_slope = std::max(max_slope, std::abs(effective[k + 1] - effective[k]) / h);
        }
    } else {
        const std::size_t n0 = map.shape[0];
        const std::size_t n1 = map.shape[1];
        const double h0 = map.cell_width(0);
        const double h1 = map.cell_width(1);
        for (std::size_t i = 0; i < n0; ++i) {
            for (std::size_t j = 0; j < n1; ++j) {
                if (i + 1 < n0) {
                    max_slope = std::max(
                        max_slope, std::abs(effective[(i + 1) * n1 + j] - effective[i * n1 + j]) / h0);
                }
                if (j + 1 < n1) {
                    max_slope = std::max(
                        max_slope, std::abs(effective[i * n1 + j + 1] - effective[i * n1 + j]) / h1);
                }
            }
        }
    }
    return 1.1 * max_slope;
}

namespace {

struct Amplification {
    bool bounded = false;
    std::string offending_cycle;
    std::vector<double> vertex_gain;  // perturbation at vertex output -> readout
};

// Gain matrix A(v, w) = sum over edges v->w of L_edge * L_map(w); the
// amplification vector solves kappa = b + A kappa with b = output-port
// indicator. Bounded iff the spectral radius of A stays below 1.
Amplification solve_amplification(const CircuitGraph& graph,
                                  const std::map<std::string, double>& lipschitz) {
    const std::size_t n = graph.vertices.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (const auto& e : graph.edges) {
        const auto s = static_cast<Eigen::Index>(graph.vertex_index(e.source));
        const auto t = static_cast<Eigen::Index>(graph.vertex_index(e.target));
        a(s, t) += lipschitz.at(e.id) * lipschitz.at(e.target);
    }

    Amplification result;

    // Power iteration on the non-negative gain matrix.
    Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    double rho = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd next = a.transpose() * x;
        const double norm = next.lpNorm<Eigen::Infinity>();
        if (norm == 0.0) {
            rho = 0.0;
            break;
        }
        rho = norm;
        x = next / norm;
    }
    if (rho >= 1.0) {
        result.bounded = false;
        // Name a simple cycle whose gain reaches 1 (depth-first search; the
        // graphs here are desk scale).
        std::vector<std::size_t> stack;
        std::vector<char> on_stack(n, 0);
        std::string found;
        const std::function<bool(std::size_t, double)> dfs = [&](std::size_t v,
                                                                 double gain) -> bool {
            on_stack[v] = 1;
            stack.push_back(v);
            for (const auto& e : graph.edges) {
                if (graph.vertex_index(e.source) != v) continue;
                const std::size_t w = graph.vertex_index(e.target);
                const double g = gain * lipschitz.at(e.id) * lipschitz.at(e.target);
                if (on_stack[w]) {
                    if (g >= 1.0) {
                        found = graph.vertices[w].id;
                        for (auto it2 = std::find(stack.begin(), stack.end(), w) + 1;
                             it2 != stack.end(); ++it2) {
                            found += "->" + graph.vertices[*it2].id;
                        }
                        found += "->" + graph.vertices[w].id;
                        return true;
                    }
                    continue;
                }
                if (dfs(w, g)) return true;
            }
            on_stack[v] = 0;
            stack.pop_back();
            return false;
        };
        for (std::size_t v = 0; v < n && found.empty(); ++v) dfs(v, 1.0);
        result.offending_cycle = found.empty() ? "(combined cycles)" : found;
        return result;
    }

    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const auto& p : graph.output_ports) {
        b(static_cast<Eigen::Index>(graph.vertex_index(p))) = 1.0;
    }
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) - a;
    const Eigen::VectorXd kappa = system.partialPivLu().solve(b);
    result.bounded = true;
    result.vertex_gain.assign(kappa.data(), kappa.data() + n);
    return result;
}

std::map<std::string, double> component_lipschitz(const CircuitGraph& graph) {
    std::map<std::string, double> lips;
    for (const auto& v : graph.vertices) lips[v.id] = lipschitz_estimate(v.map, false);
    for (const auto& e : graph.edges) lips[e.id] = lipschitz_estimate(e.map, true);
    return lips;
}

}  // namespace

TwinAssignment twinize(const CircuitGraph& graph, const TwinizeConfig& cfg) {
    graph.validate();
    if (graph.vertices.empty()) throw std::invalid_argument("twinize: empty graph");

    const auto lips = component_lipschitz(graph);
    const Amplification amp = solve_amplification(graph, lips);

    const auto component_amplification = [&](const std::string& id) {
        if (!amp.bounded) return 1.0;  // fall back to equal split
        for (const auto& v : graph.vertices) {
            if (v.id == id) return amp.vertex_gain[graph.vertex_index(id)];
        }
        for (const auto& e : graph.edges) {
            if (e.id == id) {
                return lips.at(e.target) * amp.vertex_gain[graph.vertex_index(e.target)];
            }
        }
        throw std::invalid_argument("twinize: unknown component " + id);
    };

    std::vector<std::pair<std::string, const ComponentMap*>> components;
    for (const auto& v : graph.vertices) components.push_back({v.id, &v.map});
    for (const auto& e : graph.edges) components.push_back({e.id, &e.map});
    const double k = static_cast<double>(components.size());

    TwinAssignment assignment;
    assignment.global_delta = cfg.global_delta;
    assignment.all_met = true;
    const SplitRng root(cfg.seed);

    for (const auto& [id, map] : components) {
        if (!detect_discontinuities(*map).piecewise_continuous) {
            throw std::invalid_argument("twinize: component " + id +
                                        " failed the piecewise-continuity certificate");
        }
        double delta = cfg.per_component_delta;
        if (cfg.global_delta > 0.0) {
            const double gain = std::max(component_amplification(id), 1e-12);
            delta = cfg.global_delta / (k * gain);
        }

        ToleranceConfig tc;
        tc.delta = delta;
        tc.method = cfg.method;
        tc.budget = cfg.budget;
        tc.seed = root.split(id).seed();
        tc.activation = cfg.activation;
        tc.ridge = cfg.ridge;
        ToleranceResult trained = train_to_tolerance(*map, tc);

        ComponentTwin twin;
        twin.component_id = id;
        twin.net = std::move(trained.net);
        twin.delta_l2 = trained.report.heldout_l2;
        twin.delta_sup = trained.report.heldout_sup;
        twin.requested_delta = delta;
        twin.met = trained.report.tolerance_met;
        twin.seed = tc.seed;
        twin.hidden_count = trained.report.hidden_count;
        assignment.all_met = assignment.all_met && twin.met;
        assignment.twins.push_back(std::move(twin));
    }
    return assignment;
}

CircuitGraph apply_assignment(const CircuitGraph& graph, const TwinAssignment& assignment) {
    CircuitGraph out = graph;
    for (const auto& twin : assignment.twins) {
        out = substitute(out, twin.component_id, twin.net);
    }
    return out;
}

CompositeErrorResult composite_error(const CircuitGraph& original, const CircuitGraph& twinned,
                                     const InputSpec& spec, std::size_t trials,
                                     std::uint64_t seed) {
    original.validate();
    twinned.validate();
    if (original.input_ports != twinned.input_ports ||
        original.output_ports != twinned.output_ports) {
        throw std::invalid_argument("composite_error: port mismatch between graphs");
    }
    if (trials < 1) throw std::invalid_argument("composite_error: trials must be >= 1");
    if (!(spec.hi > spec.lo)) throw std::invalid_argument("composite_error: empty input range");

    const SplitRng rng = SplitRng(seed).split("composite-error");
    const std::size_t ports = original.input_ports.size();

    CompositeErrorResult result;
    double total_sq = 0.0;
    std::size_t total_samples = 0;
    std::uint64_t counter = 0;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<std::vector<double>> inputs(ports);
        for (std::size_t p = 0; p < ports; ++p) {
            inputs[p].resize(spec.horizon);
            if (spec.constant_per_trial) {
                const double u = spec.lo + (spec.hi - spec.lo) * rng.uniform01_at(counter++);
                std::fill(inputs[p].begin(), inputs[p].end(), u);
            } else {
                for (std::size_t t = 0; t < spec.horizon; ++t) {
                    inputs[p][t] = spec.lo + (spec.hi - spec.lo) * rng.uniform01_at(counter++);
                }
            }
        }
        try {
            const auto a = evaluate(original, inputs, spec.horizon);
            const auto b = evaluate(twinned, inputs, spec.horizon);
            for (std::size_t o = 0; o < a.size(); ++o) {
                for (std::size_t t = 0; t < spec.horizon; ++t) {
                    const double e = a[o][t] - b[o][t];
                    total_sq += e * e;
                    ++total_samples;
                }
            }
            ++result.trials_used;
        } catch (const divergence_error&) {
            ++result.trials_excluded;
        }
    }
    if (result.trials_used == 0) {
        throw divergence_error("composite_error: every trial diverged", 0);
    }
    result.rms = std::sqrt(total_sq / static_cast<double>(total_samples));
    return result;
}

BudgetResult error_budget(const TwinAssignment& assignment, const CircuitGraph& graph) {
    graph.validate();
    BudgetResult result;
    result.lipschitz = component_lipschitz(graph);
    const Amplification amp = solve_amplification(graph, result.lipschitz);
    if (!amp.bounded) {
        result.bounded = false;
        result.offending_cycle = amp.offending_cycle;
        return result;
    }
    result.bounded = true;
    for (const auto& twin : assignment.twins) {
        double gain = 0.0;
        bool is_vertex = false;
        for (const auto& v : graph.vertices) {
            if (v.id == twin.component_id) {
                gain = amp.vertex_gain[graph.vertex_index(v.id)];
                is_vertex = true;
                break;
            }
        }
        if (!is_vertex) {
            bool found = false;
            for (const auto& e : graph.edges) {
                if (e.id == twin.component_id) {
                    gain = result.lipschitz.at(e.target) *
                           amp.vertex_gain[graph.vertex_index(e.target)];
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw std::invalid_argument("error_budget: assignment names unknown component " +
                                            twin.component_id);
            }
        }
        result.amplification[twin.component_id] = gain;
        result.bound += twin.delta_sup * gain;
    }
    return result;
}

std::string assignment_to_json(const TwinAssignment& assignment) {
    json j;
    j["schema_version"] = 1;
    j["all_met"] = assignment.all_met;
    j["global_delta"] = assignment.global_delta;
    j["twins"] = json::array();
    for (const auto& t : assignment.twins) {
        j["twins"].push_back({{"component_id", t.component_id},
                              {"requested_delta", t.requested_delta},
                              {"delta_l2", t.delta_l2},
                              {"delta_sup", t.delta_sup},
                              {"met", t.met},
                              {"seed", t.seed},
                              {"hidden_count", t.hidden_count}});
    }
    return j.dump(2);
}

std::string budget_to_json(const BudgetResult& budget) {
    json j;
    j["schema_version"] = 1;
    j["bounded"] = budget.bounded;
    j["bound"] = budget.bound;
    j["offending_cycle"] = budget.offending_cycle;
    j["lipschitz"] = budget.lipschitz;
    j["amplification"] = budget.amplification;
    return j.dump(2);
}

}  // namespace neurotwin
