// Experiment runner: named suites over the protocol channels, the
// rewinding simulator, and the commitment schemes, with machine-readable
// JSON/CSV reports.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qzk/error.hpp"
#include "qzk/experiment.hpp"
#include "qzk/graphs.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qzk::Error("cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) seeds.push_back(std::stoull(item));
    }
    return seeds;
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> eps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) eps.push_back(std::stod(item));
    }
    return eps;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qzk-lab: desk-scale experiments on zero-knowledge protocol channels"};

    std::string experiment;
    std::string graph_file, graph2_file;
    std::int64_t graph_bits = -1, graph2_bits = -1;
    int n_vertices = 3;
    int w_qubits = 1, v_qubits = 1;
    std::string seed_list = "1";
    int iterations = 0;
    std::string eps_list;
    double tol = 0.0;
    std::string out_path, format = "json", export_choi;
    bool list_experiments = false;

    app.add_option("--experiment", experiment, "experiment name (see --list)");
    app.add_flag("--list", list_experiments, "list the experiment catalog and exit");
    app.add_option("--graph", graph_file, "instance graph (text format)");
    app.add_option("--graph-bits", graph_bits, "instance graph as a canonical bitmask");
    app.add_option("--graph2", graph2_file, "second graph for GI pairs (text format)");
    app.add_option("--graph2-bits", graph2_bits, "second graph as a canonical bitmask");
    app.add_option("--n", n_vertices, "vertex count for --graph-bits input (default 3)");
    app.add_option("--w-qubits", w_qubits, "auxiliary register size in qubits (default 1)");
    app.add_option("--v-qubits", v_qubits, "verifier workspace size in qubits (default 1)");
    app.add_option("--seed", seed_list, "comma-separated seed list (default 1)");
    app.add_option("--k", iterations, "iteration count for the rewinding loop (0 = derived)");
    app.add_option("--eps", eps_list, "comma-separated leak parameters");
    app.add_option("--tol", tol, "override the default assertion tolerance");
    app.add_option("--out", out_path, "report output path (default stdout)");
    app.add_option("--format", format, "report format: json or csv");
    app.add_option("--export-choi", export_choi, "write the simulator Choi matrix (binary)");

    std::string scheme_kind, export_scheme_csv;
    int scheme_n = 4;
    double scheme_eps = 0.1;
    app.add_option("--scheme", scheme_kind, "commitment scheme kind: transparent, ideal, leaky");
    app.add_option("--scheme-n", scheme_n, "commitment security parameter N");
    app.add_option("--scheme-eps", scheme_eps, "leak probability of the leaky scheme");
    app.add_option("--export-scheme-csv", export_scheme_csv,
                   "write the configured scheme's support table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_experiments) {
            for (const auto& name : qzk::experiment_catalog()) std::cout << name << "\n";
            return 0;
        }
        if (experiment.empty()) {
            std::cerr << "error: --experiment is required (try --list)\n";
            return 2;
        }

        qzk::ExperimentConfig cfg;
        cfg.experiment = experiment;
        if (!graph_file.empty()) cfg.graph_text = read_file(graph_file);
        if (graph_bits >= 0)
            cfg.graph_text = qzk::graph_to_text(
                qzk::Graph(n_vertices, static_cast<std::uint64_t>(graph_bits)));
        if (!graph2_file.empty()) cfg.graph2_text = read_file(graph2_file);
        if (graph2_bits >= 0)
            cfg.graph2_text = qzk::graph_to_text(
                qzk::Graph(n_vertices, static_cast<std::uint64_t>(graph2_bits)));
        cfg.dim_w = std::size_t{1} << w_qubits;
        cfg.dim_v = std::size_t{1} << v_qubits;
        cfg.seeds = parse_seed_list(seed_list);
        cfg.iterations = iterations;
        if (!eps_list.empty()) cfg.eps_grid = parse_eps_list(eps_list);
        cfg.tol = tol;
        cfg.out_path = out_path;
        cfg.format = format;
        cfg.export_choi_path = export_choi;
        cfg.scheme_kind = scheme_kind;
        cfg.scheme_n = scheme_n;
        cfg.scheme_eps = scheme_eps;
        cfg.export_scheme_csv = export_scheme_csv;

        const qzk::ExperimentReport report = qzk::run_experiment(cfg);
        qzk::emit_report(report, cfg.format, cfg.out_path);

        for (const qzk::Assertion& a : report.assertions)
            std::cerr << (a.pass ? "[pass] " : "[FAIL] ") << a.name << " (measured "
                      << a.measured << ", tolerance " << a.tolerance << ")\n";
        std::cerr << report.experiment << (report.pass ? ": pass" : ": FAIL") << " ("
                  << report.duration_ms << " ms)\n";
        return report.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
