#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qzk {

// One run of a named experiment suite. Instances come either from the
// inline graph text fields or from the per-experiment defaults (the
// single-edge pair for GI, the triangle or K4 for G3C).
struct ExperimentConfig {
    std::string experiment;
    std::string graph_text;  // primary instance (graph text format)
    std::string graph2_text; // second graph for GI pairs
    std::size_t dim_w = 2;
    std::size_t dim_v = 2;
    std::vector<std::uint64_t> seeds = {1};
    int iterations = 0; // 0 = derive from the target residual
    std::vector<double> eps_grid = {0.0, 0.05, 0.1, 0.2};
    double tol = 0.0; // 0 = per-assertion defaults
    std::string out_path;
    std::string format = "json";
    std::string export_choi_path; // gi-equivalence: dump the simulator Choi

    // Commitment scheme manifest for the audit suite (empty kind = the
    // built-in defaults only).
    std::string scheme_kind; // transparent | ideal | leaky
    int scheme_n = 4;
    double scheme_eps = 0.1;
    std::string export_scheme_csv; // support table audit export
};

struct Assertion {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct MetricRow {
    std::uint64_t seed = 0;
    std::string name;
    double value = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::ordered_json config_echo;
    std::vector<MetricRow> metrics;
    std::vector<Assertion> assertions;
    bool pass = false;
    double duration_ms = 0.0; // console diagnostics; not serialized
};

std::vector<std::string> experiment_catalog();

ExperimentReport run_experiment(const ExperimentConfig& config);

// Stable-order serializations; identical configs produce byte-identical
// output (wall-clock time stays out of the files).
std::string emit_json(const ExperimentReport& report);
std::string emit_csv(const ExperimentReport& report);

// Writes the report in the requested format; empty path means stdout.
void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& out_path);

} // namespace qzk
