#include "qzk/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qzk/commitment.hpp"
#include "qzk/error.hpp"
#include "qzk/graphs.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"
#include "qzk/protocol_g3c.hpp"
#include "qzk/protocol_gi.hpp"
#include "qzk/rewind.hpp"
#include "qzk/state.hpp"

namespace qzk {

namespace {

void add_metric(ExperimentReport& r, std::uint64_t seed, const std::string& name, double value) {
    r.metrics.push_back({seed, name, value});
}

void assert_leq(ExperimentReport& r, const std::string& name, double measured, double tol) {
    r.assertions.push_back({name, measured, tol, measured <= tol});
}

void assert_true(ExperimentReport& r, const std::string& name, bool ok) {
    r.assertions.push_back({name, ok ? 0.0 : 1.0, 0.0, ok});
}

double tol_or(const ExperimentConfig& cfg, double fallback) {
    return cfg.tol > 0.0 ? cfg.tol : fallback;
}

GIInstance gi_instance_from(const ExperimentConfig& cfg) {
    if (!cfg.graph_text.empty() && !cfg.graph2_text.empty()) {
        const Graph g0 = parse_graph_text(cfg.graph_text).graph;
        const Graph g1 = parse_graph_text(cfg.graph2_text).graph;
        return GIInstance::make(g0, g1);
    }
    // Default pair: two isomorphic single-edge graphs on 3 vertices.
    return GIInstance::make(Graph::from_edges(3, {{1, 2}}), Graph::from_edges(3, {{2, 3}}));
}

G3CInstance g3c_instance_from(const ExperimentConfig& cfg, const Graph& fallback) {
    if (cfg.graph_text.empty()) return G3CInstance::make(fallback);
    const GraphText parsed = parse_graph_text(cfg.graph_text);
    if (parsed.colors) return G3CInstance::make_with_witness(parsed.graph, *parsed.colors);
    return G3CInstance::make(parsed.graph);
}

double vec_distance(const CVec& a, const CVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// --- experiment bodies -----------------------------------------------------

void run_gi_equivalence(const ExperimentConfig& cfg, ExperimentReport& report) {
    const GIInstance inst = gi_instance_from(cfg);
    double max_sim = 0.0, max_engine = 0.0, max_entangled = 0.0;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const std::uint64_t seed = cfg.seeds[s];
        const VerifierFamily family = seeded_family(inst, cfg.dim_w, cfg.dim_v, seed);
        const ChannelHandle phi = build_phi_direct(inst, family);
        const ChannelHandle engine = build_phi_engine(inst, family);
        const ChannelHandle sim = simulate_single_shot(assemble_gi(inst, family));

        const ChoiMatrix j_phi = choi_of(phi);
        const ChoiMatrix j_sim = choi_of(sim);
        const double d_sim = choi_trace_distance(j_phi, j_sim);
        const double d_engine = choi_trace_distance(j_phi, choi_of(engine));

        // Both channels on half of a maximally entangled pair.
        const std::size_t dw = cfg.dim_w;
        RegisterLayout pair_layout({{"W", dw}, {"E", dw}});
        ComplexMatrix omega(dw * dw, dw * dw);
        for (std::size_t i = 0; i < dw; ++i)
            for (std::size_t j = 0; j < dw; ++j)
                omega(i * dw + i, j * dw + j) = 1.0 / static_cast<double>(dw);
        const DensityOperator entangled(pair_layout, omega);
        const double d_ent = state_trace_distance(apply_to_first_register(phi, entangled),
                                                  apply_to_first_register(sim, entangled));

        add_metric(report, seed, "choi_distance_sim_vs_real", d_sim);
        add_metric(report, seed, "choi_distance_direct_vs_engine", d_engine);
        add_metric(report, seed, "entangled_output_distance", d_ent);
        max_sim = std::max(max_sim, d_sim);
        max_engine = std::max(max_engine, d_engine);
        max_entangled = std::max(max_entangled, d_ent);

        if (s == 0 && !cfg.export_choi_path.empty()) write_choi(j_sim, cfg.export_choi_path);
    }
    assert_leq(report, "simulator equals real interaction (max Choi distance)", max_sim,
               tol_or(cfg, 1e-9));
    assert_leq(report, "direct and engine builds agree (max Choi distance)", max_engine, 1e-12);
    assert_leq(report, "entangled auxiliary outputs agree (max trace distance)", max_entangled,
               tol_or(cfg, 1e-9));
}

void run_gi_claim1(const ExperimentConfig& cfg, ExperimentReport& report) {
    const GIInstance inst = gi_instance_from(cfg);
    double max_eig_dev = 0.0, max_frob = 0.0, max_outcome_dev = 0.0, max_recovery = 0.0;
    for (const std::uint64_t seed : cfg.seeds) {
        const VerifierFamily family = seeded_family(inst, cfg.dim_w, cfg.dim_v, seed);
        const SimulatorAssembly assembly = assemble_gi(inst, family);
        const ComplexMatrix q = compress_success_operator(assembly);

        double frob = 0.0;
        for (std::size_t r = 0; r < q.rows(); ++r)
            for (std::size_t c = 0; c < q.cols(); ++c) {
                const cplx expected = (r == c) ? cplx{0.5, 0.0} : cplx{0.0, 0.0};
                frob += std::norm(q(r, c) - expected);
            }
        frob = std::sqrt(frob);

        double eig_dev = 0.0;
        for (double lambda : hermitian_eigenvalues(q))
            eig_dev = std::max(eig_dev, std::abs(lambda - 0.5));

        // First-measurement statistics and the recovery identity on
        // random pure auxiliary inputs.
        double outcome_dev = 0.0, recovery = 0.0;
        for (int t = 0; t < 20; ++t) {
            CVec v = assembly.initial_vector(
                random_unit_vector(assembly.dim_w(), mix_seed(seed, 1000 + t)));
            assembly.apply_u(v);
            CVec succ = v;
            assembly.project_agree(succ, 0);
            const double p0 = norm_sq(succ);
            outcome_dev = std::max(outcome_dev, std::abs(p0 - 0.5));

            CVec fail = v;
            assembly.project_agree(fail, 1);
            assembly.apply_u(fail, true);
            assembly.reflect_ancilla(fail);
            assembly.apply_u(fail);
            const double fail_norm = std::sqrt(norm_sq(fail));
            const double succ_norm = std::sqrt(p0);
            for (cplx& x : fail) x /= fail_norm;
            for (cplx& x : succ) x /= succ_norm;
            recovery = std::max(recovery, vec_distance(fail, succ));
        }
        add_metric(report, seed, "max_eigenvalue_deviation", eig_dev);
        add_metric(report, seed, "operator_identity_frobenius", frob);
        add_metric(report, seed, "max_outcome0_deviation", outcome_dev);
        add_metric(report, seed, "max_recovery_residual", recovery);
        max_eig_dev = std::max(max_eig_dev, eig_dev);
        max_frob = std::max(max_frob, frob);
        max_outcome_dev = std::max(max_outcome_dev, outcome_dev);
        max_recovery = std::max(max_recovery, recovery);
    }
    assert_leq(report, "success operator eigenvalues equal 1/2", max_eig_dev, 1e-10);
    assert_leq(report, "compressed operator identity (Frobenius)", max_frob, tol_or(cfg, 1e-9));
    assert_leq(report, "first outcome-0 probability equals 1/2", max_outcome_dev, 1e-10);
    assert_leq(report, "failure branch recovers the success state", max_recovery, 1e-10);
}

void run_lemma_check(const ExperimentConfig& cfg, ExperimentReport& report) {
    // Synthetic two-dimensional rotations at fixed mixing weights.
    double max_synth = 0.0;
    for (const double lambda : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double c = std::sqrt(lambda), s = std::sqrt(1.0 - lambda);
        const ComplexMatrix u = ComplexMatrix::from_rows({{c, -s}, {s, c}});
        const ComplexMatrix p0 = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
        const RewindRotation rot =
            decompose_rotation(dense_rotation_ops(u, p0, p0), CVec{1.0, 0.0});
        add_metric(report, 0, "synthetic_residual_lambda_" + std::to_string(lambda),
                   rot.residuals.max_identity_residual());
        max_synth = std::max(max_synth, rot.residuals.max_identity_residual());
    }
    assert_leq(report, "synthetic rotation identities", max_synth, 1e-10);

    const GIInstance inst = gi_instance_from(cfg);
    double max_protocol = 0.0, max_lambda_dev = 0.0;
    for (const std::uint64_t seed : cfg.seeds) {
        const VerifierFamily family = seeded_family(inst, cfg.dim_w, cfg.dim_v, seed);
        const SimulatorAssembly assembly = assemble_gi(inst, family);
        const CVec seed_vec = assembly.initial_vector(
            random_unit_vector(assembly.dim_w(), mix_seed(seed, 77)));
        const RewindRotation rot = decompose_rotation(assembly_rotation_ops(assembly), seed_vec);
        add_metric(report, seed, "protocol_residual", rot.residuals.max_identity_residual());
        add_metric(report, seed, "lambda", rot.lambda);
        max_protocol = std::max(max_protocol, rot.residuals.max_identity_residual());
        max_lambda_dev = std::max(max_lambda_dev, std::abs(rot.lambda - 0.5));
    }
    assert_leq(report, "protocol rotation identities", max_protocol, 1e-10);
    assert_leq(report, "protocol mixing weight equals 1/2", max_lambda_dev, 1e-10);
}

void run_gi_classical(const ExperimentConfig& cfg, ExperimentReport& report) {
    (void)cfg;
    long long iso_pairs = 0, transcripts = 0, completeness_failures = 0;
    long long noniso_pairs = 0, cheating_deviations = 0;
    for (const int n : {3, 4}) {
        const auto graphs = all_graphs(n);
        const auto perms = enumerate_group(n);
        for (std::size_t a = 0; a < graphs.size(); ++a)
            for (std::size_t b = a; b < graphs.size(); ++b) {
                const GIInstance inst = GIInstance::make(graphs[a], graphs[b]);
                if (inst.isomorphic) {
                    ++iso_pairs;
                    // Exhaust the prover's randomness and both verifier bits.
                    for (const Permutation& pi : perms) {
                        const Graph h = apply_permutation(pi, inst.g0);
                        for (int bit = 0; bit < 2; ++bit) {
                            const Permutation tau =
                                (bit == 0) ? pi : compose(pi, inst.sigma);
                            const Graph& g_bit = (bit == 0) ? inst.g0 : inst.g1;
                            ++transcripts;
                            if (!(apply_permutation(tau, g_bit) == h)) ++completeness_failures;
                        }
                    }
                } else {
                    ++noniso_pairs;
                    if (!(optimal_cheating_value(inst) == Rational{1, 2})) ++cheating_deviations;
                }
            }
    }
    add_metric(report, 0, "isomorphic_pairs", static_cast<double>(iso_pairs));
    add_metric(report, 0, "transcripts_checked", static_cast<double>(transcripts));
    add_metric(report, 0, "non_isomorphic_pairs", static_cast<double>(noniso_pairs));
    assert_true(report, "perfect completeness on every isomorphic pair (n = 3, 4)",
                completeness_failures == 0);
    assert_true(report, "optimal cheating value is exactly 1/2 on every non-isomorphic pair",
                cheating_deviations == 0);
}

void run_g3c_ideal(const ExperimentConfig& cfg, ExperimentReport& report) {
    const G3CInstance inst = g3c_instance_from(cfg, Graph::from_edges(3, {{1, 2}, {1, 3}, {2, 3}}));
    if (!inst.colorable) throw PreconditionError("g3c-ideal: instance must be 3-colorable");
    const CommitmentScheme scheme = CommitmentScheme::ideal(2);
    const double lambda = 1.0 / static_cast<double>(inst.m);

    double max_spec_dev = 0.0, max_residual_dev = 0.0, max_channel_dist = 0.0;
    for (const std::uint64_t seed : cfg.seeds) {
        const G3CVerifierFamily family =
            seeded_g3c_family(inst, scheme, cfg.dim_w, cfg.dim_v, seed);
        const SimulatorAssembly assembly = assemble_g3c(inst, family, scheme);

        const ComplexMatrix q = compress_success_operator(assembly);
        for (double ev : hermitian_eigenvalues(q))
            max_spec_dev = std::max(max_spec_dev, std::abs(ev - lambda));
        add_metric(report, seed, "spectrum_deviation_from_1_over_m", max_spec_dev);

        const double retry = 1.0 - 4.0 * lambda * (1.0 - lambda);
        for (const int k : {1, 2, 3, 5}) {
            const IteratedRun run = simulate_iterated(assembly, k, false);
            const double closed = (1.0 - lambda) * std::pow(retry, k - 1);
            const double dev = std::abs(run.residual_failure - closed);
            add_metric(report, seed, "residual_deviation_k" + std::to_string(k), dev);
            max_residual_dev = std::max(max_residual_dev, dev);
        }

        const int k_channel =
            cfg.iterations > 0 ? cfg.iterations : default_iteration_count(lambda);
        const IteratedRun run = simulate_iterated(assembly, k_channel, true);
        const ChannelHandle real = build_g3c_interaction(inst, family, scheme);
        const double dist = choi_trace_distance(choi_of(run.conditional_channel), choi_of(real));
        add_metric(report, seed, "conditional_channel_choi_distance", dist);
        max_channel_dist = std::max(max_channel_dist, dist);
    }
    assert_leq(report, "success spectrum equals 1/m", max_spec_dev, 1e-10);
    assert_leq(report, "residual failure matches the closed form", max_residual_dev,
               tol_or(cfg, 1e-9));
    assert_leq(report, "success-conditioned channel equals the real iteration", max_channel_dist,
               tol_or(cfg, 1e-8));
}

void run_g3c_leaky(const ExperimentConfig& cfg, ExperimentReport& report) {
    const G3CInstance inst = g3c_instance_from(cfg, Graph::from_edges(3, {{1, 2}, {1, 3}, {2, 3}}));
    if (!inst.colorable) throw PreconditionError("g3c-leaky: instance must be 3-colorable");
    const CommitmentScheme alphabet_scheme = CommitmentScheme::leaky(0.0);
    const std::uint64_t seed = cfg.seeds.front();
    const G3CVerifierFamily family =
        seeded_g3c_family(inst, alphabet_scheme, cfg.dim_w, cfg.dim_v, seed);

    std::vector<double> spreads;
    double eig_bound_violation = 0.0;
    for (const double eps : cfg.eps_grid) {
        const std::vector<double> spectrum = q_spectrum_under_leak(inst, family, eps);
        const double spread = spectrum.back() - spectrum.front();
        spreads.push_back(spread);
        add_metric(report, seed, "spread_eps_" + std::to_string(eps), spread);
        for (double ev : spectrum) {
            eig_bound_violation = std::max(eig_bound_violation, -ev);
            eig_bound_violation = std::max(eig_bound_violation, ev - 1.0);
        }
    }
    double worst_monotonicity = 0.0;
    for (std::size_t i = 0; i + 1 < spreads.size(); ++i)
        worst_monotonicity = std::max(worst_monotonicity, spreads[i] - spreads[i + 1]);

    assert_leq(report, "spread vanishes at eps = 0", spreads.empty() ? 0.0 : spreads.front(),
               1e-10);
    assert_leq(report, "spread is nondecreasing along the eps grid", worst_monotonicity, 1e-12);
    assert_leq(report, "spectrum stays inside [0, 1]", eig_bound_violation, 1e-10);
}

void run_g3c_classical(const ExperimentConfig& cfg, ExperimentReport& report) {
    const G3CInstance inst = g3c_instance_from(cfg, Graph::complete(4));
    const CommitmentScheme scheme = CommitmentScheme::transparent(4);
    const int rounds = inst.m * inst.m;
    const G3CSoundness soundness = classical_g3c_soundness(inst, scheme, rounds);
    add_metric(report, 0, "per_round_optimum", soundness.per_round.value());
    add_metric(report, 0, "multi_round_bound", soundness.multi_round_bound);

    const bool k4_default = cfg.graph_text.empty();
    if (k4_default) {
        assert_true(report, "K4 per-round optimum is exactly 5/6",
                    soundness.per_round == Rational{5, 6});
        const double expected_bound = std::pow(5.0 / 6.0, 36);
        assert_leq(report, "36-round bound equals (5/6)^36",
                   std::abs(soundness.multi_round_bound - expected_bound), 0.0);
    }

    // Monte Carlo acceptance of the best fixed committed assignment
    // against the honest uniform-edge verifier.
    const ColoringScore score = best_coloring_score(inst.g);
    const auto edge_list = inst.g.edges();
    const long long trials = 100000;
    Rng rng(cfg.seeds.front());
    long long accepted = 0;
    for (long long t = 0; t < trials; ++t) {
        const auto [u, v] = edge_list[rng.below(edge_list.size())];
        if (score.best.colors[u - 1] != score.best.colors[v - 1]) ++accepted;
    }
    const double mean = static_cast<double>(accepted) / static_cast<double>(trials);
    const double p = soundness.per_round.value();
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    add_metric(report, cfg.seeds.front(), "monte_carlo_acceptance", mean);
    add_metric(report, cfg.seeds.front(), "standard_error", se);
    assert_leq(report, "Monte Carlo acceptance within 3 standard errors of the optimum",
               std::abs(mean - p), 3.0 * se);
}

CommitmentScheme scheme_from_manifest(const ExperimentConfig& cfg) {
    if (cfg.scheme_kind == "transparent") return CommitmentScheme::transparent(cfg.scheme_n);
    if (cfg.scheme_kind == "ideal") return CommitmentScheme::ideal(2);
    if (cfg.scheme_kind == "leaky") return CommitmentScheme::leaky(cfg.scheme_eps);
    throw PreconditionError("scheme manifest: kind must be transparent, ideal, or leaky");
}

void run_commitment_audit(const ExperimentConfig& cfg, ExperimentReport& report) {
    bool binding_all = true;
    for (int n = 1; n <= 6; ++n) {
        const BindingReport b = binding_check(CommitmentScheme::transparent(n));
        binding_all = binding_all && b.pass;
        add_metric(report, n, "binding_pairs_checked", static_cast<double>(b.pairs_checked));
    }
    assert_true(report, "transparent scheme is binding for N = 1..6", binding_all);

    if (!cfg.scheme_kind.empty()) {
        const CommitmentScheme scheme = scheme_from_manifest(cfg);
        if (!cfg.export_scheme_csv.empty()) {
            std::ofstream out(cfg.export_scheme_csv);
            if (!out) throw Error("cannot open '" + cfg.export_scheme_csv + "'");
            out << distribution_csv(scheme);
        }
        if (scheme.deterministic()) {
            assert_true(report, "configured scheme is binding", binding_check(scheme).pass);
        } else {
            double max_tv = 0.0;
            for (int a = 1; a <= scheme.gamma_size(); ++a)
                for (int b = a + 1; b <= scheme.gamma_size(); ++b)
                    max_tv = std::max(max_tv, concealing_tv(scheme, a, b));
            add_metric(report, 0, "configured_scheme_max_tv", max_tv);
        }
    }

    const CommitmentScheme transparent = CommitmentScheme::transparent(4);
    const CommitmentScheme ideal = CommitmentScheme::ideal(2);
    double max_dev = 0.0;
    max_dev = std::max(max_dev, std::abs(concealing_tv(transparent, 1, 2) - 1.0));
    max_dev = std::max(max_dev, std::abs(concealing_tv(ideal, 1, 3)));
    for (const double eps : cfg.eps_grid) {
        const CommitmentScheme leaky = CommitmentScheme::leaky(eps);
        for (int a = 1; a <= 3; ++a)
            for (int b = a + 1; b <= 3; ++b)
                max_dev = std::max(max_dev, std::abs(concealing_tv(leaky, a, b) - eps));
    }
    add_metric(report, 0, "max_tv_deviation", max_dev);
    assert_leq(report, "total-variation distances match the scheme parameters", max_dev, 1e-12);
}

} // namespace

std::vector<std::string> experiment_catalog() {
    return {"gi-equivalence", "gi-claim1",  "lemma-check",   "gi-classical",
            "g3c-ideal",      "g3c-leaky",  "g3c-classical", "commitment-audit"};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw PreconditionError("experiment config: seeds must be nonempty");
    ExperimentReport report;
    report.experiment = cfg.experiment;

    nlohmann::ordered_json echo;
    echo["experiment"] = cfg.experiment;
    echo["graph"] = cfg.graph_text;
    echo["graph2"] = cfg.graph2_text;
    echo["dim_w"] = cfg.dim_w;
    echo["dim_v"] = cfg.dim_v;
    echo["seeds"] = cfg.seeds;
    echo["iterations"] = cfg.iterations;
    echo["eps_grid"] = cfg.eps_grid;
    echo["tol"] = cfg.tol;
    if (!cfg.scheme_kind.empty()) {
        echo["scheme"] = {{"kind", cfg.scheme_kind}, {"N", cfg.scheme_n}, {"eps", cfg.scheme_eps}};
    }
    report.config_echo = std::move(echo);

    const auto start = std::chrono::steady_clock::now();
    if (cfg.experiment == "gi-equivalence") {
        run_gi_equivalence(cfg, report);
    } else if (cfg.experiment == "gi-claim1") {
        run_gi_claim1(cfg, report);
    } else if (cfg.experiment == "lemma-check") {
        run_lemma_check(cfg, report);
    } else if (cfg.experiment == "gi-classical") {
        run_gi_classical(cfg, report);
    } else if (cfg.experiment == "g3c-ideal") {
        run_g3c_ideal(cfg, report);
    } else if (cfg.experiment == "g3c-leaky") {
        run_g3c_leaky(cfg, report);
    } else if (cfg.experiment == "g3c-classical") {
        run_g3c_classical(cfg, report);
    } else if (cfg.experiment == "commitment-audit") {
        run_commitment_audit(cfg, report);
    } else {
        throw PreconditionError("unknown experiment '" + cfg.experiment + "'");
    }
    report.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    report.pass = true;
    for (const Assertion& a : report.assertions) report.pass = report.pass && a.pass;
    return report;
}

std::string emit_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = "qzk-report/1";
    j["experiment"] = report.experiment;
    j["config"] = report.config_echo;
    j["metrics"] = nlohmann::ordered_json::array();
    for (const MetricRow& m : report.metrics) {
        nlohmann::ordered_json row;
        row["seed"] = m.seed;
        row["name"] = m.name;
        row["value"] = m.value;
        j["metrics"].push_back(std::move(row));
    }
    j["assertions"] = nlohmann::ordered_json::array();
    for (const Assertion& a : report.assertions) {
        nlohmann::ordered_json row;
        row["name"] = a.name;
        row["measured"] = a.measured;
        row["tolerance"] = a.tolerance;
        row["pass"] = a.pass;
        j["assertions"].push_back(std::move(row));
    }
    j["pass"] = report.pass;
    return j.dump(2) + "\n";
}

std::string emit_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "seed,metric,value\n";
    for (const MetricRow& m : report.metrics)
        out << m.seed << "," << m.name << "," << m.value << "\n";
    return out.str();
}

void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& out_path) {
    std::string payload;
    if (format == "json") {
        payload = emit_json(report);
    } else if (format == "csv") {
        payload = emit_csv(report);
    } else {
        throw PreconditionError("emit_report: format must be json or csv");
    }
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("emit_report: cannot open '" + out_path + "'");
    out << payload;
    if (!out) throw Error("emit_report: write failed for '" + out_path + "'");
}

} // namespace qzk
