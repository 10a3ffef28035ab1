#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "qzk/error.hpp"
#include "qzk/experiment.hpp"

using namespace qzk;

namespace {

ExperimentConfig quick(const std::string& name) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.seeds = {1, 2};
    cfg.dim_v = 1; // keep unit-test runs small
    return cfg;
}

} // namespace

TEST_CASE("catalog and dispatch") {
    const auto names = experiment_catalog();
    CHECK(names.size() == 8);

    ExperimentConfig cfg = quick("no-such-experiment");
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);

    cfg = quick("gi-claim1");
    cfg.seeds.clear();
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
}

TEST_CASE("gi experiments pass") {
    for (const char* name : {"gi-equivalence", "gi-claim1", "lemma-check"}) {
        const ExperimentReport report = run_experiment(quick(name));
        CHECK(report.pass);
        CHECK_FALSE(report.assertions.empty());
        for (const Assertion& a : report.assertions) {
            INFO(name, ": ", a.name);
            CHECK(a.pass);
        }
    }
}

TEST_CASE("classical experiments pass") {
    for (const char* name : {"gi-classical", "g3c-classical", "commitment-audit"}) {
        const ExperimentReport report = run_experiment(quick(name));
        CHECK(report.pass);
    }
}

TEST_CASE("commitment audit honours the scheme manifest") {
    ExperimentConfig cfg = quick("commitment-audit");
    cfg.scheme_kind = "leaky";
    cfg.scheme_eps = 0.25;
    const ExperimentReport report = run_experiment(cfg);
    CHECK(report.pass);
    bool found = false;
    for (const MetricRow& m : report.metrics)
        if (m.name == "configured_scheme_max_tv") {
            found = true;
            CHECK(m.value == doctest::Approx(0.25).epsilon(1e-12));
        }
    CHECK(found);

    cfg.scheme_kind = "no-such-kind";
    CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
}

TEST_CASE("g3c quantum experiments pass at reduced dims") {
    ExperimentConfig cfg = quick("g3c-ideal");
    cfg.seeds = {1};
    const ExperimentReport ideal = run_experiment(cfg);
    CHECK(ideal.pass);

    cfg = quick("g3c-leaky");
    cfg.seeds = {1};
    cfg.eps_grid = {0.0, 0.1};
    const ExperimentReport leaky = run_experiment(cfg);
    CHECK(leaky.pass);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    ExperimentConfig cfg = quick("gi-claim1");
    cfg.seeds = {3};

    omp_set_num_threads(1);
    const std::string first = emit_json(run_experiment(cfg));
    omp_set_num_threads(4);
    const std::string second = emit_json(run_experiment(cfg));
    CHECK(first == second);

    const ExperimentReport report = run_experiment(cfg);
    CHECK(emit_json(report) == emit_json(report)); // re-emission is stable
    CHECK(first.find("\"schema\": \"qzk-report/1\"") != std::string::npos);
}

TEST_CASE("csv has one row per seed and metric") {
    ExperimentConfig cfg = quick("gi-claim1");
    cfg.seeds = {4, 5};
    const ExperimentReport report = run_experiment(cfg);
    const std::string csv = emit_csv(report);
    CHECK(csv.rfind("seed,metric,value\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == report.metrics.size() + 1);

    CHECK_THROWS_AS(emit_report(report, "xml", ""), PreconditionError);
}

TEST_CASE("experiment failure surfaces through the pass flag") {
    // An impossible tolerance forces a red assertion without touching the
    // spec-pinned defaults.
    ExperimentConfig cfg = quick("gi-equivalence");
    cfg.seeds = {1};
    cfg.tol = 1e-30;
    const ExperimentReport report = run_experiment(cfg);
    CHECK_FALSE(report.pass);
}
