#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "neurotwin/circuit.hpp"
#include "neurotwin/train.hpp"

namespace neurotwin {

struct ComponentTwin {
    std::string component_id;
    Slfn net;
    double delta_l2 = 0.0;   // held-out L2 deviation of the twin
    double delta_sup = 0.0;  // held-out max deviation, feeds the budget
    double requested_delta = 0.0;
    bool met = false;
    std::uint64_t seed = 0;
    std::size_t hidden_count = 0;
};

struct TwinAssignment {
    std::vector<ComponentTwin> twins;
    bool all_met = false;
    double global_delta = 0.0;  // 0 when per-component budgets were given
};

struct TwinizeConfig {
    double global_delta = 0.0;          // split across components when > 0
    double per_component_delta = 1e-2;  // used when global_delta == 0
    TrainMethod method = TrainMethod::elm;
    std::size_t budget = 512;
    std::uint64_t seed = 0;
    Activation activation = Activation::logistic;
    double ridge = 0.0;
};

// One twin per component (vertices and edges) via train_to_tolerance, with
// per-component seeds split from the global seed by component id. A global
// delta is divided as delta / (count * downstream amplification) so the
// budgeted contributions sum back to delta. Components that miss their
// budget are flagged, not fatal.
TwinAssignment twinize(const CircuitGraph& graph, const TwinizeConfig& cfg);

// Graph with every twin of the assignment substituted.
CircuitGraph apply_assignment(const CircuitGraph& graph, const TwinAssignment& assignment);

struct InputSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t horizon = 32;       // evaluation steps per trial
    bool constant_per_trial = true; // false: fresh draw every step
};

struct CompositeErrorResult {
    double rms = 0.0;
    std::size_t trials_used = 0;
    std::size_t trials_excluded = 0;  // diverged in either graph
};

// Monte Carlo root-mean-square output deviation between two graphs over
// inputs drawn from the spec. Deterministic given the seed.
CompositeErrorResult composite_error(const CircuitGraph& original, const CircuitGraph& twinned,
                                     const InputSpec& spec, std::size_t trials,
                                     std::uint64_t seed);

// Max finite-difference slope over the component grid, inflated by 10%.
// Edge maps fold their probability channel in (expected-value transmission).
double lipschitz_estimate(const ComponentMap& map, bool fold_probability = false);

struct BudgetResult {
    double bound = 0.0;
    bool bounded = false;
    std::string offending_cycle;  // named when a cycle gain reaches 1
    std::map<std::string, double> lipschitz;      // per component id
    std::map<std::string, double> amplification;  // per component id
};

// Analytic propagation bound: sum over substituted components of the
// recorded held-out sup deviation times the summed-over-paths product of
// downstream Lipschitz estimates, with geometric closure of feedback loops
// (requires loop gain < 1).
BudgetResult error_budget(const TwinAssignment& assignment, const CircuitGraph& graph);

std::string assignment_to_json(const TwinAssignment& assignment);
std::string budget_to_json(const BudgetResult& budget);

}  // namespace neurotwin
