// Command-line front end: simulate components, extract maps, certify
// smoothness, train twins, compose circuits, and verify composite error.
//
// Exit codes: 0 success, 2 validation failure, 3 tolerance unmet,
// 4 numerical divergence.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "neurotwin/backprop.hpp"
#include "neurotwin/circuit.hpp"
#include "neurotwin/component_map.hpp"
#include "neurotwin/rate_map.hpp"
#include "neurotwin/smoothness.hpp"
#include "neurotwin/synapse.hpp"
#include "neurotwin/train.hpp"
#include "neurotwin/twin.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace neurotwin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitToleranceUnmet = 3;
constexpr int kExitDivergence = 4;

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return json::parse(in);
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

// Reports carry the reproducible payload (config echo + result) separately
// from volatile metadata, so re-runs compare byte-identical on the payload.
void write_report(const std::string& path, json config, json result) {
    json report;
    report["schema_version"] = 1;
    report["payload"] = {{"config", std::move(config)}, {"result", std::move(result)}};
    report["meta"] = {{"timestamp", iso_timestamp()}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << report.dump(2) << "\n";
}

struct MapCommand {
    std::string component_path;
    std::string out_dir = ".";
    std::size_t grid = 0;
    std::uint64_t seed = 0;
};

int run_map(const MapCommand& cmd) {
    const json spec = load_json_file(cmd.component_path);
    const std::string kind = spec.at("kind").get<std::string>();
    if (cmd.grid < 2) throw std::invalid_argument("map: grid must have at least 2 points");

    Box domain;
    domain.lo = spec.at("domain").at("lo").get<std::vector<double>>();
    domain.hi = spec.at("domain").at("hi").get<std::vector<double>>();

    RateMapConfig rate_cfg;
    if (spec.contains("window_ms")) rate_cfg.window_ms = spec.at("window_ms").get<double>();
    if (spec.contains("discard_ms")) rate_cfg.discard_ms = spec.at("discard_ms").get<double>();
    if (spec.contains("dt")) rate_cfg.dt = spec.at("dt").get<double>();

    ComponentMap map;
    json excluded = json::array();
    if (kind == "hh" || kind == "lif") {
        NeuronParams params;
        const json p = spec.value("params", json::object());
        if (kind == "hh") {
            HHParams hh;
            hh.c_m = p.value("c_m", hh.c_m);
            hh.g_na = p.value("g_na", hh.g_na);
            hh.g_k = p.value("g_k", hh.g_k);
            hh.g_leak = p.value("g_leak", hh.g_leak);
            hh.e_na = p.value("e_na", hh.e_na);
            hh.e_k = p.value("e_k", hh.e_k);
            hh.e_leak = p.value("e_leak", hh.e_leak);
            hh.validate();
            params = hh;
        } else {
            LIFParams lif;
            lif.tau = p.value("tau", lif.tau);
            lif.theta = p.value("theta", lif.theta);
            lif.v_reset = p.value("v_reset", lif.v_reset);
            lif.validate();
            params = lif;
        }
        RateMapResult result = firing_rate_map(params, domain, cmd.grid, rate_cfg);
        map = std::move(result.map);
        for (std::size_t k : result.excluded) excluded.push_back(k);
    } else if (kind == "synapse") {
        SynapseParams sp;
        const json p = spec.value("params", json::object());
        sp.amplitude = p.value("amplitude", sp.amplitude);
        sp.slope = p.value("slope", sp.slope);
        sp.midpoint = p.value("midpoint", sp.midpoint);
        sp.p = p.value("p", sp.p);
        sp.delay = p.value("delay", sp.delay);
        map = synapse_map(sp, domain, cmd.grid);
    } else {
        throw std::invalid_argument("map: unknown component kind: " + kind);
    }

    fs::create_directories(cmd.out_dir);
    save_map_json(map, (fs::path(cmd.out_dir) / "map.json").string());
    save_map_csv(map, (fs::path(cmd.out_dir) / "map.csv").string());
    write_report((fs::path(cmd.out_dir) / "map_report.json").string(),
                 json{{"command", "map"},
                      {"component", spec},
                      {"grid", cmd.grid},
                      {"seed", cmd.seed}},
                 json{{"rows", map.size()}, {"excluded_points", excluded}});
    std::cout << "map: wrote " << map.size() << " grid rows to " << cmd.out_dir << "\n";
    return kExitOk;
}

struct CheckCommand {
    std::string map_path;
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

json check_config_json(const CheckConfig& cfg) {
    return json{{"jump_tol", cfg.jump_tol},     {"refine_depth", cfg.refine_depth},
                {"neighborhood", cfg.neighborhood}, {"margin", cfg.margin},
                {"level_tol", cfg.level_tol},   {"plateau_cells", cfg.plateau_cells}};
}

int run_check(const CheckCommand& cmd) {
    const ComponentMap map = load_map_json(cmd.map_path);
    CheckConfig cfg;
    if (!cmd.config_path.empty()) {
        const json j = load_json_file(cmd.config_path);
        cfg.jump_tol = j.value("jump_tol", cfg.jump_tol);
        cfg.refine_depth = j.value("refine_depth", cfg.refine_depth);
        cfg.neighborhood = j.value("neighborhood", cfg.neighborhood);
        cfg.margin = j.value("margin", cfg.margin);
        cfg.level_tol = j.value("level_tol", cfg.level_tol);
        cfg.plateau_cells = j.value("plateau_cells", cfg.plateau_cells);
    }

    const SmoothnessReport report = detect_discontinuities(map, cfg);
    const AllOrNoneReport aon = check_all_or_none_smoothness(map, default_levels(map), cfg);

    fs::create_directories(cmd.out_dir);
    write_report((fs::path(cmd.out_dir) / "smoothness_report.json").string(),
                 json{{"command", "check"},
                      {"map", cmd.map_path},
                      {"check_config", check_config_json(report.config)},
                      {"seed", cmd.seed}},
                 json{{"smoothness", json::parse(smoothness_report_to_json(report))},
                      {"all_or_none", json::parse(all_or_none_report_to_json(aon))}});
    std::ofstream csv((fs::path(cmd.out_dir) / "smoothness_summary.csv").string(),
                      std::ios::binary);
    csv << smoothness_summary_csv(report);
    std::cout << "check: " << report.discontinuities.size() << " discontinuities, verdict "
              << (report.piecewise_continuous ? "piecewise-continuous" : "rejected") << "\n";
    return kExitOk;
}

struct TrainCommand {
    std::string map_path;
    std::string out_dir = ".";
    double delta = 1e-2;
    std::string method = "elm";
    std::size_t budget = 256;
    std::uint64_t seed = 0;
};

int run_train(const TrainCommand& cmd) {
    const ComponentMap map = load_map_json(cmd.map_path);
    ToleranceConfig cfg;
    cfg.delta = cmd.delta;
    cfg.method = train_method_from_name(cmd.method);
    cfg.budget = cmd.budget;
    cfg.seed = cmd.seed;
    const ToleranceResult result = train_to_tolerance(map, cfg);

    fs::create_directories(cmd.out_dir);
    save_slfn_json(result.net, (fs::path(cmd.out_dir) / "net.json").string());
    write_report((fs::path(cmd.out_dir) / "train_report.json").string(),
                 json{{"command", "train"},
                      {"map", cmd.map_path},
                      {"delta", cmd.delta},
                      {"method", cmd.method},
                      {"budget", cmd.budget},
                      {"seed", cmd.seed}},
                 json::parse(train_report_to_json(result.report)));
    std::cout << "train: heldout_l2 " << result.report.heldout_l2 << " with "
              << result.report.hidden_count << " hidden nodes ("
              << (result.report.tolerance_met ? "met" : "unmet") << ")\n";
    return result.report.tolerance_met ? kExitOk : kExitToleranceUnmet;
}

struct TwinizeCommand {
    std::string graph_path;
    std::string out_dir = ".";
    double delta = 1e-2;
    bool global_delta = false;
    std::string method = "elm";
    std::size_t budget = 512;
    std::uint64_t seed = 0;
};

int run_twinize(const TwinizeCommand& cmd) {
    const CircuitGraph graph = load_graph_json(cmd.graph_path);
    TwinizeConfig cfg;
    if (cmd.global_delta) {
        cfg.global_delta = cmd.delta;
    } else {
        cfg.per_component_delta = cmd.delta;
    }
    cfg.method = train_method_from_name(cmd.method);
    cfg.budget = cmd.budget;
    cfg.seed = cmd.seed;

    const TwinAssignment assignment = twinize(graph, cfg);
    const CircuitGraph twinned = apply_assignment(graph, assignment);

    fs::create_directories(cmd.out_dir);
    save_graph_json(twinned, (fs::path(cmd.out_dir) / "twinned_graph.json").string());
    const BudgetResult budget = error_budget(assignment, graph);
    write_report((fs::path(cmd.out_dir) / "assignment.json").string(),
                 json{{"command", "twinize"},
                      {"graph", cmd.graph_path},
                      {"delta", cmd.delta},
                      {"global", cmd.global_delta},
                      {"method", cmd.method},
                      {"budget", cmd.budget},
                      {"seed", cmd.seed}},
                 json{{"assignment", json::parse(assignment_to_json(assignment))},
                      {"error_budget", json::parse(budget_to_json(budget))}});
    std::cout << "twinize: " << assignment.twins.size() << " twins, "
              << (assignment.all_met ? "all met" : "some unmet") << "\n";
    return assignment.all_met ? kExitOk : kExitToleranceUnmet;
}

struct VerifyCommand {
    std::string graph_path;
    std::string twinned_path;
    std::string assignment_path;
    std::string out_dir = ".";
    std::size_t trials = 100;
    double input_lo = 0.0;
    double input_hi = 1.0;
    std::size_t horizon = 32;
    std::uint64_t seed = 0;
};

int run_verify(const VerifyCommand& cmd) {
    const CircuitGraph original = load_graph_json(cmd.graph_path);
    const CircuitGraph twinned = load_graph_json(cmd.twinned_path);
    InputSpec spec;
    spec.lo = cmd.input_lo;
    spec.hi = cmd.input_hi;
    spec.horizon = cmd.horizon;
    const CompositeErrorResult result =
        composite_error(original, twinned, spec, cmd.trials, cmd.seed);

    json out{{"composite_rms", result.rms},
             {"trials_used", result.trials_used},
             {"trials_excluded", result.trials_excluded}};
    fs::create_directories(cmd.out_dir);
    write_report((fs::path(cmd.out_dir) / "verify_report.json").string(),
                 json{{"command", "verify"},
                      {"graph", cmd.graph_path},
                      {"twinned", cmd.twinned_path},
                      {"trials", cmd.trials},
                      {"input_lo", cmd.input_lo},
                      {"input_hi", cmd.input_hi},
                      {"horizon", cmd.horizon},
                      {"seed", cmd.seed}},
                 std::move(out));
    std::cout << "verify: composite rms " << result.rms << " over " << result.trials_used
              << " trials\n";
    return kExitOk;
}

struct GradcheckCommand {
    std::string net_path;
    std::string map_path;
    std::string out_dir = ".";
    double h = 1e-6;
    std::uint64_t seed = 0;
};

int run_gradcheck(const GradcheckCommand& cmd) {
    const Slfn net = load_slfn_json(cmd.net_path);
    const ComponentMap map = load_map_json(cmd.map_path);
    const Dataset data = dataset_from_map(map);
    const double deviation = bp_gradient_check(net, data, cmd.h);

    fs::create_directories(cmd.out_dir);
    write_report((fs::path(cmd.out_dir) / "gradcheck_report.json").string(),
                 json{{"command", "gradcheck"},
                      {"net", cmd.net_path},
                      {"map", cmd.map_path},
                      {"h", cmd.h},
                      {"seed", cmd.seed}},
                 json{{"max_relative_deviation", deviation}});
    std::cout << "gradcheck: max relative deviation " << deviation << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Component-twin synthesis and verification pipeline"};
    app.require_subcommand(1);

    MapCommand map_cmd;
    auto* map_sub = app.add_subcommand("map", "Extract a component map onto a grid");
    map_sub->add_option("--config", map_cmd.component_path, "Component parameter JSON")->required();
    map_sub->add_option("--grid", map_cmd.grid, "Grid resolution")->required();
    map_sub->add_option("--out", map_cmd.out_dir, "Output directory");
    map_sub->add_option("--seed", map_cmd.seed, "Run seed");

    CheckCommand check_cmd;
    auto* check_sub = app.add_subcommand("check", "Certify a map's smoothness");
    check_sub->add_option("--map", check_cmd.map_path, "Map JSON file")->required();
    check_sub->add_option("--config", check_cmd.config_path, "Check config JSON");
    check_sub->add_option("--out", check_cmd.out_dir, "Output directory");
    check_sub->add_option("--seed", check_cmd.seed, "Run seed");

    TrainCommand train_cmd;
    auto* train_sub = app.add_subcommand("train", "Train a twin to tolerance");
    train_sub->add_option("--map", train_cmd.map_path, "Target map JSON file")->required();
    train_sub->add_option("--delta", train_cmd.delta, "Held-out L2 tolerance");
    train_sub->add_option("--method", train_cmd.method, "elm or bp")
        ->check(CLI::IsMember({"elm", "bp"}));
    train_sub->add_option("--budget", train_cmd.budget, "Max hidden nodes (elm) or epochs (bp)");
    train_sub->add_option("--out", train_cmd.out_dir, "Output directory");
    train_sub->add_option("--seed", train_cmd.seed, "Run seed");

    TwinizeCommand twinize_cmd;
    auto* twinize_sub = app.add_subcommand("twinize", "Train twins for every graph component");
    twinize_sub->add_option("--graph", twinize_cmd.graph_path, "Graph JSON file")->required();
    twinize_sub->add_option("--delta", twinize_cmd.delta, "Tolerance budget");
    twinize_sub->add_flag("--global", twinize_cmd.global_delta,
                          "Treat --delta as a global budget to split");
    twinize_sub->add_option("--method", twinize_cmd.method, "elm or bp")
        ->check(CLI::IsMember({"elm", "bp"}));
    twinize_sub->add_option("--budget", twinize_cmd.budget, "Per-component training budget");
    twinize_sub->add_option("--out", twinize_cmd.out_dir, "Output directory");
    twinize_sub->add_option("--seed", twinize_cmd.seed, "Run seed");

    VerifyCommand verify_cmd;
    auto* verify_sub = app.add_subcommand("verify", "Monte Carlo composite error of two graphs");
    verify_sub->add_option("--graph", verify_cmd.graph_path, "Original graph JSON")->required();
    verify_sub->add_option("--twinned", verify_cmd.twinned_path, "Twinned graph JSON")->required();
    verify_sub->add_option("--trials", verify_cmd.trials, "Monte Carlo trials");
    verify_sub->add_option("--input-lo", verify_cmd.input_lo, "Input range lower bound");
    verify_sub->add_option("--input-hi", verify_cmd.input_hi, "Input range upper bound");
    verify_sub->add_option("--horizon", verify_cmd.horizon, "Steps per trial");
    verify_sub->add_option("--out", verify_cmd.out_dir, "Output directory");
    verify_sub->add_option("--seed", verify_cmd.seed, "Run seed");

    GradcheckCommand grad_cmd;
    auto* grad_sub = app.add_subcommand("gradcheck", "Finite-difference gradient verification");
    grad_sub->add_option("--net", grad_cmd.net_path, "Network JSON file")->required();
    grad_sub->add_option("--map", grad_cmd.map_path, "Dataset map JSON file")->required();
    grad_sub->add_option("--step", grad_cmd.h, "Finite-difference step");
    grad_sub->add_option("--out", grad_cmd.out_dir, "Output directory");
    grad_sub->add_option("--seed", grad_cmd.seed, "Run seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (map_sub->parsed()) return run_map(map_cmd);
        if (check_sub->parsed()) return run_check(check_cmd);
        if (train_sub->parsed()) return run_train(train_cmd);
        if (twinize_sub->parsed()) return run_twinize(twinize_cmd);
        if (verify_sub->parsed()) return run_verify(verify_cmd);
        if (grad_sub->parsed()) return run_gradcheck(grad_cmd);
    } catch (const divergence_error& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
