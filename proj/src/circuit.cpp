#include "neurotwin/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "neurotwin/rng.hpp"

namespace neurotwin {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::size_t CircuitGraph::vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].id == id) return i;
    }
    throw std::invalid_argument("circuit: unknown vertex id: " + id);
}

bool CircuitGraph::has_component(const std::string& id) const {
    for (const auto& v : vertices) {
        if (v.id == id) return true;
    }
    for (const auto& e : edges) {
        if (e.id == id) return true;
    }
    return false;
}

namespace {

// Topological order of vertices over the zero-delay edges only; throws on a
// zero-delay (algebraic) cycle.
std::vector<std::size_t> zero_delay_topo_order(const CircuitGraph& graph) {
    const std::size_t n = graph.vertices.size();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& e : graph.edges) {
        if (e.delay > 0) continue;
        const std::size_t s = graph.vertex_index(e.source);
        const std::size_t t = graph.vertex_index(e.target);
        out[s].push_back(t);
        ++indeg[t];
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indeg[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (std::size_t w : out[v]) {
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    if (order.size() != n) {
        throw std::invalid_argument("circuit: cycle without a delayed edge");
    }
    return order;
}

}  // namespace

void CircuitGraph::validate() const {
    std::set<std::string> ids;
    for (const auto& v : vertices) {
        if (!ids.insert(v.id).second) throw std::invalid_argument("circuit: duplicate id " + v.id);
        v.map.validate();
        if (v.map.dims() != 1) throw std::invalid_argument("circuit: vertex map must be 1-D: " + v.id);
    }
    for (const auto& e : edges) {
        if (!ids.insert(e.id).second) throw std::invalid_argument("circuit: duplicate id " + e.id);
        e.map.validate();
        if (e.map.dims() != 1) throw std::invalid_argument("circuit: edge map must be 1-D: " + e.id);
        vertex_index(e.source);
        vertex_index(e.target);
    }
    for (const auto& p : input_ports) vertex_index(p);
    for (const auto& p : output_ports) vertex_index(p);
    zero_delay_topo_order(*this);
    for (const auto& [id, net] : twins) {
        if (!has_component(id)) throw std::invalid_argument("circuit: twin for unknown id " + id);
        net.validate();
        if (net.input_dim != 1 || net.output_dim != 1) {
            throw std::invalid_argument("circuit: twin dimension mismatch for " + id);
        }
    }
}

namespace {

// Twins inherit the map's domain semantics in the circuit: samples clamp at
// the hull, so a substituted network saturates at its training box instead
// of extrapolating freely.
double component_output(const CircuitGraph& graph, const std::string& id,
                        const ComponentMap& map, double x) {
    const auto it = graph.twins.find(id);
    if (it != graph.twins.end()) {
        const Slfn& net = it->second;
        return forward1(net, std::clamp(x, net.scale_lo[0], net.scale_hi[0]));
    }
    return map.eval1(x);
}

}  // namespace

std::vector<std::vector<double>> evaluate(const CircuitGraph& graph,
                                          const std::vector<std::vector<double>>& inputs,
                                          std::size_t steps, const EvaluateOptions& options) {
    graph.validate();
    if (inputs.size() != graph.input_ports.size()) {
        throw std::invalid_argument("evaluate: input series count does not match input ports");
    }
    for (const auto& series : inputs) {
        if (series.size() < steps) {
            throw std::invalid_argument("evaluate: input series shorter than requested steps");
        }
    }

    const std::size_t n = graph.vertices.size();
    const auto order = zero_delay_topo_order(graph);

    std::vector<std::vector<std::pair<std::size_t, const EdgeSpec*>>> incoming(n);
    for (const auto& e : graph.edges) {
        incoming[graph.vertex_index(e.target)].push_back({graph.vertex_index(e.source), &e});
    }
    std::vector<int> external(n, -1);
    for (std::size_t k = 0; k < graph.input_ports.size(); ++k) {
        external[graph.vertex_index(graph.input_ports[k])] = static_cast<int>(k);
    }

    const SplitRng rng = SplitRng(options.seed).split("bernoulli-transmission");
    std::uint64_t draw_counter = 0;

    std::vector<std::vector<double>> history(n, std::vector<double>(steps, 0.0));
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t v : order) {
            double drive = external[v] >= 0 ? inputs[static_cast<std::size_t>(external[v])][t] : 0.0;
            for (const auto& [src, edge] : incoming[v]) {
                double x;
                if (edge->delay == 0) {
                    x = history[src][t];  // topo order guarantees availability
                } else {
                    x = t >= edge->delay ? history[src][t - edge->delay] : 0.0;
                }
                double y = component_output(graph, edge->id, edge->map, x);
                if (!edge->map.probability.empty()) {
                    const double xs[1] = {x};
                    const double p = edge->map.interpolate_channel(edge->map.probability, xs);
                    if (options.bernoulli) {
                        y = rng.uniform01_at(draw_counter++) < p ? y : 0.0;
                    } else {
                        y *= p;
                    }
                }
                drive += y;
            }
            if (!std::isfinite(drive)) {
                throw divergence_error("evaluate: non-finite drive into vertex " +
                                           graph.vertices[v].id + " step " + std::to_string(t),
                                       t);
            }
            const double out = component_output(graph, graph.vertices[v].id,
                                                graph.vertices[v].map, drive);
            if (!std::isfinite(out)) {
                throw divergence_error("evaluate: non-finite signal at vertex " +
                                           graph.vertices[v].id + " step " + std::to_string(t),
                                       t);
            }
            history[v][t] = out;
        }
    }

    std::vector<std::vector<double>> outputs;
    outputs.reserve(graph.output_ports.size());
    for (const auto& p : graph.output_ports) outputs.push_back(history[graph.vertex_index(p)]);
    return outputs;
}

CircuitGraph substitute(const CircuitGraph& graph, const std::string& component_id,
                        const Slfn& twin) {
    if (!graph.has_component(component_id)) {
        throw std::invalid_argument("substitute: unknown component id: " + component_id);
    }
    twin.validate();
    if (twin.input_dim != 1 || twin.output_dim != 1) {
        throw std::invalid_argument("substitute: twin dimensions do not match component " +
                                    component_id);
    }
    CircuitGraph out = graph;
    out.twins[component_id] = twin;
    return out;
}

ComponentMap graph_static_map(const CircuitGraph& graph, const Box& input_domain,
                              std::size_t resolution, std::size_t settle_steps) {
    graph.validate();
    if (input_domain.dims() != 1 || graph.input_ports.size() != 1 || graph.output_ports.empty()) {
        throw std::invalid_argument("graph_static_map: needs one input port and 1-D domain");
    }
    const CircuitGraph frozen = graph;
    const std::size_t steps = std::max<std::size_t>(settle_steps, 1);
    return sample_map(input_domain, {resolution}, [frozen, steps](std::span<const double> x) {
        const std::vector<std::vector<double>> inputs{std::vector<double>(steps, x[0])};
        return evaluate(frozen, inputs, steps).front().back();
    });
}

void save_graph_json(const CircuitGraph& graph, const std::string& path) {
    graph.validate();
    const fs::path graph_path(path);
    const fs::path dir = graph_path.parent_path();
    const std::string stem = graph_path.stem().string();
    const fs::path assets = dir / (stem + "_components");
    fs::create_directories(assets);

    json j;
    j["schema_version"] = 1;
    j["vertices"] = json::array();
    for (const auto& v : graph.vertices) {
        const fs::path map_path = assets / (v.id + ".map.json");
        save_map_json(v.map, map_path.string());
        j["vertices"].push_back(
            {{"id", v.id}, {"map", fs::relative(map_path, dir).string()}});
    }
    j["edges"] = json::array();
    for (const auto& e : graph.edges) {
        const fs::path map_path = assets / (e.id + ".map.json");
        save_map_json(e.map, map_path.string());
        j["edges"].push_back({{"id", e.id},
                              {"source", e.source},
                              {"target", e.target},
                              {"map", fs::relative(map_path, dir).string()},
                              {"delay", e.delay}});
    }
    j["input_ports"] = graph.input_ports;
    j["output_ports"] = graph.output_ports;
    j["twins"] = json::object();
    for (const auto& [id, net] : graph.twins) {
        const fs::path net_path = assets / (id + ".net.json");
        save_slfn_json(net, net_path.string());
        j["twins"][id] = fs::relative(net_path, dir).string();
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2);
}

CircuitGraph load_graph_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const json j = json::parse(ss.str());
    const fs::path dir = fs::path(path).parent_path();

    CircuitGraph graph;
    for (const auto& jv : j.at("vertices")) {
        VertexSpec v;
        v.id = jv.at("id").get<std::string>();
        v.map = load_map_json((dir / jv.at("map").get<std::string>()).string());
        graph.vertices.push_back(std::move(v));
    }
    for (const auto& je : j.at("edges")) {
        EdgeSpec e;
        e.id = je.at("id").get<std::string>();
        e.source = je.at("source").get<std::string>();
        e.target = je.at("target").get<std::string>();
        e.map = load_map_json((dir / je.at("map").get<std::string>()).string());
        e.delay = je.at("delay").get<std::size_t>();
        graph.edges.push_back(std::move(e));
    }
    graph.input_ports = j.at("input_ports").get<std::vector<std::string>>();
    graph.output_ports = j.at("output_ports").get<std::vector<std::string>>();
    if (j.contains("twins")) {
        for (const auto& [id, net_path] : j.at("twins").items()) {
            graph.twins[id] = load_slfn_json((dir / net_path.get<std::string>()).string());
        }
    }
    graph.validate();
    return graph;
}

}  // namespace neurotwin
