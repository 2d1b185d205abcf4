#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "neurotwin/component_map.hpp"
#include "neurotwin/slfn.hpp"

namespace neurotwin {

// Raised when a signal goes non-finite during graph evaluation.
class divergence_error : public std::runtime_error {
  public:
    divergence_error(const std::string& what, std::size_t step_index)
        : std::runtime_error(what), step(step_index) {}
    std::size_t step;
};

struct VertexSpec {
    std::string id;
    ComponentMap map;  // static neuron map applied to the summed drive
};

struct EdgeSpec {
    std::string id;
    std::string source;
    std::string target;
    ComponentMap map;        // synapse map applied to the source output
    std::size_t delay = 0;   // whole evaluation steps
};

// Directed circuit of neuron vertices and synapse edges. Signal flow is
// one-directional along each edge; vertices sum their incoming edge outputs.
// Every cycle must contain an edge with delay >= 1, so the zero-delay
// subgraph stays acyclic and a synchronous step is well defined.
struct CircuitGraph {
    std::vector<VertexSpec> vertices;
    std::vector<EdgeSpec> edges;
    std::vector<std::string> input_ports;   // vertices receiving external drive
    std::vector<std::string> output_ports;  // vertices read out
    std::map<std::string, Slfn> twins;      // substituted components, by id

    std::size_t vertex_index(const std::string& id) const;
    bool has_component(const std::string& id) const;
    void validate() const;
};

struct EvaluateOptions {
    bool bernoulli = false;   // sample the probability channel instead of
                              // taking its expected value
    std::uint64_t seed = 0;
};

// Synchronous discrete-time evaluation. inputs[k] drives input_ports[k] and
// must hold at least `steps` samples; the result holds one series per output
// port. Within a step, vertices are processed in topological order of the
// zero-delay subgraph; an edge with delay d reads its source's output from
// d steps back (zero history before t = 0).
std::vector<std::vector<double>> evaluate(const CircuitGraph& graph,
                                          const std::vector<std::vector<double>>& inputs,
                                          std::size_t steps,
                                          const EvaluateOptions& options = {});

// Identical graph with the named component evaluated by the twin network.
CircuitGraph substitute(const CircuitGraph& graph, const std::string& component_id,
                        const Slfn& twin);

// Steady-state input->output map of the graph: each grid input is held
// constant for settle_steps and the first output port's final sample is
// recorded. The returned map carries the graph run as its evaluator.
ComponentMap graph_static_map(const CircuitGraph& graph, const Box& input_domain,
                              std::size_t resolution, std::size_t settle_steps = 64);

// JSON adjacency format; component maps and twins are referenced by file
// path and written next to the graph file.
void save_graph_json(const CircuitGraph& graph, const std::string& path);
CircuitGraph load_graph_json(const std::string& path);

}  // namespace neurotwin
