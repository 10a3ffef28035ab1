// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are pinned in code next to each check.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qzk/channel.hpp"
#include "qzk/commitment.hpp"
#include "qzk/graphs.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"
#include "qzk/protocol_g3c.hpp"
#include "qzk/protocol_gi.hpp"
#include "qzk/rewind.hpp"
#include "qzk/state.hpp"

using namespace qzk;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

double vec_distance(const CVec& a, const CVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

constexpr int kFamilyCount = 20;

struct GIFamilyData {
    double choi_sim_vs_real = 0.0;
    double claim_frobenius = 0.0;
    double claim_eig_dev = 0.0;
    double lemma_residual = 0.0;
    double outcome_dev = 0.0;
    double recovery_residual = 0.0;
    double entangled_distance = 0.0;
};

GIFamilyData evaluate_family(const GIInstance& inst, std::uint64_t seed) {
    GIFamilyData data;
    const VerifierFamily family = seeded_family(inst, 2, 2, seed);
    const SimulatorAssembly assembly = assemble_gi(inst, family);

    const ChannelHandle phi = build_phi_direct(inst, family);
    const ChannelHandle sim = simulate_single_shot(assembly);
    data.choi_sim_vs_real = choi_trace_distance(choi_of(phi), choi_of(sim));

    const ComplexMatrix q = compress_success_operator(assembly);
    double frob = 0.0;
    for (std::size_t r = 0; r < q.rows(); ++r)
        for (std::size_t c = 0; c < q.cols(); ++c)
            frob += std::norm(q(r, c) - ((r == c) ? cplx{0.5, 0.0} : cplx{0.0, 0.0}));
    data.claim_frobenius = std::sqrt(frob);
    for (double ev : hermitian_eigenvalues(q))
        data.claim_eig_dev = std::max(data.claim_eig_dev, std::abs(ev - 0.5));

    const RewindRotation rot = decompose_rotation(
        assembly_rotation_ops(assembly),
        assembly.initial_vector(random_unit_vector(2, mix_seed(seed, 7))));
    data.lemma_residual = rot.residuals.max_identity_residual();

    for (int t = 0; t < 20; ++t) {
        CVec v = assembly.initial_vector(random_unit_vector(2, mix_seed(seed, 100 + t)));
        assembly.apply_u(v);
        CVec succ = v;
        assembly.project_agree(succ, 0);
        const double p0 = norm_sq(succ);
        data.outcome_dev = std::max(data.outcome_dev, std::abs(p0 - 0.5));

        CVec fail = v;
        assembly.project_agree(fail, 1);
        assembly.apply_u(fail, true);
        assembly.reflect_ancilla(fail);
        assembly.apply_u(fail);
        const double pf = norm_sq(fail);
        for (cplx& x : fail) x /= std::sqrt(pf);
        for (cplx& x : succ) x /= std::sqrt(p0);
        data.recovery_residual = std::max(data.recovery_residual, vec_distance(fail, succ));
    }

    RegisterLayout pair_layout({{"W", 2}, {"E", 2}});
    ComplexMatrix omega(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) omega(i * 2 + i, j * 2 + j) = 0.5;
    const DensityOperator ent(pair_layout, omega);
    data.entangled_distance = state_trace_distance(apply_to_first_register(phi, ent),
                                                   apply_to_first_register(sim, ent));
    return data;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");

    const GIInstance gi =
        GIInstance::make(Graph::from_edges(3, {{1, 2}}), Graph::from_edges(3, {{2, 3}}));

    GIFamilyData worst;
    for (int s = 1; s <= kFamilyCount; ++s) {
        const GIFamilyData d = evaluate_family(gi, static_cast<std::uint64_t>(s));
        worst.choi_sim_vs_real = std::max(worst.choi_sim_vs_real, d.choi_sim_vs_real);
        worst.claim_frobenius = std::max(worst.claim_frobenius, d.claim_frobenius);
        worst.claim_eig_dev = std::max(worst.claim_eig_dev, d.claim_eig_dev);
        worst.lemma_residual = std::max(worst.lemma_residual, d.lemma_residual);
        worst.outcome_dev = std::max(worst.outcome_dev, d.outcome_dev);
        worst.recovery_residual = std::max(worst.recovery_residual, d.recovery_residual);
        worst.entangled_distance = std::max(worst.entangled_distance, d.entangled_distance);
    }

    // 1. Simulator channel equals the real interaction channel.
    report(1, "GI channel equality over 20 seeded families", worst.choi_sim_vs_real <= 1e-9,
           "max Choi distance " + fmt(worst.choi_sim_vs_real) + " <= 1e-9");

    // 2. Compressed success operator is exactly half the identity.
    report(2, "success operator identity (eigenvalue 1/2)",
           worst.claim_frobenius <= 1e-9 && worst.claim_eig_dev <= 1e-10,
           "Frobenius " + fmt(worst.claim_frobenius) + " <= 1e-9, eig dev " +
               fmt(worst.claim_eig_dev) + " <= 1e-10");

    // 3. Rotation identity suite, synthetic weights and protocol instances.
    {
        double max_synth = 0.0;
        for (const double lambda : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const double c = std::sqrt(lambda), s = std::sqrt(1.0 - lambda);
            const ComplexMatrix u = ComplexMatrix::from_rows({{c, -s}, {s, c}});
            const ComplexMatrix p0 = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
            const RewindRotation rot =
                decompose_rotation(dense_rotation_ops(u, p0, p0), CVec{1.0, 0.0});
            max_synth = std::max(max_synth, rot.residuals.max_identity_residual());
        }
        const bool pass = max_synth <= 1e-10 && worst.lemma_residual <= 1e-10;
        report(3, "rotation identities (synthetic and 20 protocol instances)", pass,
               "synthetic " + fmt(max_synth) + ", protocol " + fmt(worst.lemma_residual) +
                   " <= 1e-10");
    }

    // 4. Measurement statistics and failure-branch recovery.
    report(4, "outcome-0 probability 1/2 and exact recovery",
           worst.outcome_dev <= 1e-10 && worst.recovery_residual <= 1e-10,
           "probability dev " + fmt(worst.outcome_dev) + ", recovery " +
               fmt(worst.recovery_residual) + " <= 1e-10");

    // 5. Agreement on half of a maximally entangled input.
    report(5, "entangled auxiliary input", worst.entangled_distance <= 1e-9,
           "max trace distance " + fmt(worst.entangled_distance) + " <= 1e-9");

    // 6. Classical GI: perfect completeness and soundness 1/2, exhaustively.
    {
        long long completeness_failures = 0, cheating_deviations = 0;
        long long iso_pairs = 0, noniso_pairs = 0;
        for (const int n : {3, 4}) {
            const auto graphs = all_graphs(n);
            const auto perms = enumerate_group(n);
            for (std::size_t a = 0; a < graphs.size(); ++a)
                for (std::size_t b = a; b < graphs.size(); ++b) {
                    const GIInstance inst = GIInstance::make(graphs[a], graphs[b]);
                    if (inst.isomorphic) {
                        ++iso_pairs;
                        for (const Permutation& pi : perms) {
                            const Graph h = apply_permutation(pi, inst.g0);
                            for (int bit = 0; bit < 2; ++bit) {
                                const Permutation tau = (bit == 0) ? pi : compose(pi, inst.sigma);
                                const Graph& g_bit = (bit == 0) ? inst.g0 : inst.g1;
                                if (!(apply_permutation(tau, g_bit) == h)) ++completeness_failures;
                            }
                        }
                    } else {
                        ++noniso_pairs;
                        if (!(optimal_cheating_value(inst) == Rational{1, 2}))
                            ++cheating_deviations;
                    }
                }
        }
        report(6, "classical GI completeness and optimal cheating value",
               completeness_failures == 0 && cheating_deviations == 0,
               std::to_string(iso_pairs) + " isomorphic pairs perfect, " +
                   std::to_string(noniso_pairs) + " non-isomorphic pairs at exactly 1/2");
    }

    // 7. Idealized G3C on the triangle: 1/m spectrum, closed-form residuals,
    //    conditional channel equal to the real iteration.
    {
        const G3CInstance tri = G3CInstance::make(Graph::from_edges(3, {{1, 2}, {1, 3}, {2, 3}}));
        const CommitmentScheme ideal = CommitmentScheme::ideal(2);
        const G3CVerifierFamily family = seeded_g3c_family(tri, ideal, 2, 2, 1);
        const SimulatorAssembly assembly = assemble_g3c(tri, family, ideal);
        const double lambda = 1.0 / 3.0;

        double spec_dev = 0.0;
        for (double ev : hermitian_eigenvalues(compress_success_operator(assembly)))
            spec_dev = std::max(spec_dev, std::abs(ev - lambda));

        double residual_dev = 0.0;
        for (const int k : {1, 2, 3, 5}) {
            const IteratedRun run = simulate_iterated(assembly, k, false);
            const double closed = (2.0 / 3.0) * std::pow(1.0 / 9.0, k - 1);
            residual_dev = std::max(residual_dev, std::abs(run.residual_failure - closed));
        }

        const IteratedRun run = simulate_iterated(assembly, 2, true);
        const double channel_dist = choi_trace_distance(
            choi_of(run.conditional_channel), choi_of(build_g3c_interaction(tri, family, ideal)));

        report(7, "idealized G3C (spectrum 1/m, residual law, channel equality)",
               spec_dev <= 1e-10 && residual_dev <= 1e-9 && channel_dist <= 1e-8,
               "spectrum dev " + fmt(spec_dev) + " <= 1e-10, residual dev " + fmt(residual_dev) +
                   " <= 1e-9, Choi distance " + fmt(channel_dist) + " <= 1e-8");
    }

    // 8. Leaky-commitment spectrum: zero spread at eps 0, monotone growth,
    //    eigenvalues inside [0, 1].
    {
        const G3CInstance tri = G3CInstance::make(Graph::from_edges(3, {{1, 2}, {1, 3}, {2, 3}}));
        const G3CVerifierFamily family =
            seeded_g3c_family(tri, CommitmentScheme::leaky(0.0), 2, 2, 1);
        std::vector<double> spreads;
        double bound_violation = 0.0;
        for (const double eps : {0.0, 0.05, 0.1, 0.2}) {
            const std::vector<double> spectrum = q_spectrum_under_leak(tri, family, eps);
            spreads.push_back(spectrum.back() - spectrum.front());
            for (double ev : spectrum) {
                bound_violation = std::max(bound_violation, -ev);
                bound_violation = std::max(bound_violation, ev - 1.0);
            }
        }
        double monotone_violation = 0.0;
        for (std::size_t i = 0; i + 1 < spreads.size(); ++i)
            monotone_violation = std::max(monotone_violation, spreads[i] - spreads[i + 1]);
        report(8, "G3C leaky spectrum spread",
               spreads.front() <= 1e-10 && monotone_violation <= 1e-12 &&
                   bound_violation <= 1e-10,
               "spread(0) " + fmt(spreads.front()) + ", monotonicity violation " +
                   fmt(monotone_violation) + ", range violation " + fmt(bound_violation));
    }

    // 9. Classical G3C soundness on K4.
    {
        const G3CInstance k4 = G3CInstance::make(Graph::complete(4));
        const CommitmentScheme scheme = CommitmentScheme::transparent(4);
        const G3CSoundness s = classical_g3c_soundness(k4, scheme, 36);
        const bool per_round_exact = (s.per_round == Rational{5, 6});
        const double bound = std::pow(5.0 / 6.0, 36);
        const bool bound_exact = (s.multi_round_bound == bound);

        const ColoringScore score = best_coloring_score(k4.g);
        const auto edge_list = k4.g.edges();
        const long long trials = 100000;
        Rng rng(2026);
        long long accepted = 0;
        for (long long t = 0; t < trials; ++t) {
            const auto [u, v] = edge_list[rng.below(edge_list.size())];
            if (score.best.colors[u - 1] != score.best.colors[v - 1]) ++accepted;
        }
        const double mean = static_cast<double>(accepted) / trials;
        const double p = 5.0 / 6.0;
        const double se = std::sqrt(p * (1.0 - p) / trials);
        const bool mc_ok = std::abs(mean - p) <= 3.0 * se;

        report(9, "classical G3C soundness on K4", per_round_exact && bound_exact && mc_ok,
               "per-round 5/6 exact, 36-round bound " + fmt(s.multi_round_bound) +
                   ", Monte Carlo |" + fmt(mean) + " - 5/6| <= 3 SE (" + fmt(3.0 * se) + ")");
    }

    // 10. Commitment audit.
    {
        bool binding_all = true;
        for (int n = 1; n <= 6; ++n)
            binding_all = binding_all && binding_check(CommitmentScheme::transparent(n)).pass;
        double tv_dev = 0.0;
        tv_dev = std::max(tv_dev,
                          std::abs(concealing_tv(CommitmentScheme::transparent(4), 1, 2) - 1.0));
        tv_dev = std::max(tv_dev, std::abs(concealing_tv(CommitmentScheme::ideal(2), 2, 3)));
        for (const double eps : {0.0, 0.05, 0.1, 0.2, 0.5}) {
            const CommitmentScheme leaky = CommitmentScheme::leaky(eps);
            for (int a = 1; a <= 3; ++a)
                for (int b = a + 1; b <= 3; ++b)
                    tv_dev = std::max(tv_dev, std::abs(concealing_tv(leaky, a, b) - eps));
        }
        report(10, "commitment audit (binding and concealing)", binding_all && tv_dev <= 1e-12,
               std::string("binding N=1..6 ") + (binding_all ? "pass" : "fail") +
                   ", max TV deviation " + fmt(tv_dev) + " <= 1e-12");
    }

    // 11. The two independent interaction constructions coincide.
    {
        double max_dist = 0.0;
        for (int s = 1; s <= 10; ++s) {
            const VerifierFamily family = seeded_family(gi, 2, 2, static_cast<std::uint64_t>(s));
            max_dist = std::max(max_dist,
                                choi_trace_distance(choi_of(build_phi_direct(gi, family)),
                                                    choi_of(build_phi_engine(gi, family))));
        }
        report(11, "direct vs engine interaction builds", max_dist <= 1e-12,
               "max Choi distance " + fmt(max_dist) + " <= 1e-12");
    }

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
