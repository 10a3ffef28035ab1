#include "qzk/protocol_g3c.hpp"

#include <cmath>
#include <map>

#include "qzk/config.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"

namespace qzk {

namespace {

void require_distributional(const CommitmentScheme& scheme, const char* what) {
    if (scheme.kind() == SchemeKind::transparent)
        throw PreconditionError(std::string(what) +
                                ": needs a distributional (ideal or leaky) commitment scheme");
}

void require_match(const G3CVerifierFamily& family, const CommitmentScheme& scheme,
                   const char* what) {
    if (family.vertex_alphabet != scheme.support_alphabet())
        throw PreconditionError(std::string(what) +
                                ": family alphabet does not match the commitment scheme");
}

// Probability of each alphabet symbol given the committed color.
std::vector<double> symbol_probs(const CommitmentScheme& scheme,
                                 const std::vector<std::string>& alphabet, int color) {
    std::map<std::string, double> table;
    for (const auto& [sym, p] : scheme.distribution(color).table) table[sym] += p;
    std::vector<double> probs;
    probs.reserve(alphabet.size());
    for (const auto& sym : alphabet) {
        auto it = table.find(sym);
        probs.push_back(it == table.end() ? 0.0 : it->second);
    }
    return probs;
}

// All 3^n colorings, vertex 1 most significant.
std::vector<std::vector<int>> all_colorings(int n) {
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    std::vector<std::vector<int>> out;
    out.reserve(total);
    for (long code = 0; code < total; ++code) {
        std::vector<int> colors(n);
        long rem = code;
        for (int v = n - 1; v >= 0; --v) {
            colors[v] = static_cast<int>(rem % 3) + 1;
            rem /= 3;
        }
        out.push_back(std::move(colors));
    }
    return out;
}

// M_{y,e} = (I (x) <e|) V_y (I (x) |0_VA>), W -> W (x) V.
ComplexMatrix g3c_message_operator(const G3CVerifierFamily& family, std::size_t y, int e) {
    const ComplexMatrix& v_y = family.unitaries[y];
    const std::size_t w = family.dim_w;
    const std::size_t wv = w * family.dim_v;
    const std::size_t m = static_cast<std::size_t>(family.m);
    ComplexMatrix out(wv, w);
    for (std::size_t row = 0; row < wv; ++row)
        for (std::size_t i = 0; i < w; ++i)
            out(row, i) = v_y(row * m + static_cast<std::size_t>(e), i * family.dim_v * m);
    return out;
}

} // namespace

G3CInstance G3CInstance::make(const Graph& g) {
    G3CInstance inst;
    inst.g = g;
    inst.m = g.edge_count();
    const ColoringScore score = best_coloring_score(g);
    inst.colorable = (score.total_edges == 0) || (score.best_edges == score.total_edges);
    inst.witness = inst.colorable ? score.best
                                  : ColorAssignment{g.vertex_count(),
                                                    std::vector<int>(g.vertex_count(), 1)};
    return inst;
}

G3CInstance G3CInstance::make_with_witness(const Graph& g, const ColorAssignment& witness) {
    if (!is_valid_coloring(g, witness))
        throw PreconditionError("G3CInstance: supplied witness is not a valid 3-coloring");
    G3CInstance inst;
    inst.g = g;
    inst.m = g.edge_count();
    inst.witness = witness;
    inst.colorable = true;
    return inst;
}

std::size_t G3CVerifierFamily::y_dim() const {
    std::size_t d = 1;
    for (int i = 0; i < n; ++i) d *= vertex_alphabet.size();
    return d;
}

std::size_t G3CVerifierFamily::composite_index(const std::vector<int>& symbol_indices) const {
    if (static_cast<int>(symbol_indices.size()) != n)
        throw PreconditionError("composite_index: one symbol per vertex required");
    std::size_t y = 0;
    for (int v = 0; v < n; ++v) {
        const int s = symbol_indices[v];
        if (s < 0 || s >= static_cast<int>(vertex_alphabet.size()))
            throw PreconditionError("composite_index: symbol index out of range");
        y = y * vertex_alphabet.size() + static_cast<std::size_t>(s);
    }
    return y;
}

G3CVerifierFamily seeded_g3c_family(const G3CInstance& inst, const CommitmentScheme& scheme,
                                    std::size_t dim_w, std::size_t dim_v, std::uint64_t seed) {
    require_distributional(scheme, "seeded_g3c_family");
    if (inst.m < 1) throw PreconditionError("seeded_g3c_family: instance needs at least one edge");
    G3CVerifierFamily family;
    family.dim_w = dim_w;
    family.dim_v = dim_v;
    family.n = inst.g.vertex_count();
    family.m = inst.m;
    family.vertex_alphabet = scheme.support_alphabet();
    family.seed = seed;
    const std::size_t dim = dim_w * dim_v * static_cast<std::size_t>(inst.m);
    const std::size_t y_dim = family.y_dim();
    ensure_within_cap(y_dim * dim, "seeded_g3c_family");
    family.unitaries.reserve(y_dim);
    for (std::size_t y = 0; y < y_dim; ++y)
        family.unitaries.push_back(random_unitary(dim, mix_seed(seed, y)));
    return family;
}

int reveal_pair_index(int color_u, int color_v) {
    static constexpr std::array<std::pair<int, int>, kRevealPairs> pairs = {
        {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}}};
    for (int i = 0; i < kRevealPairs; ++i)
        if (pairs[i].first == color_u && pairs[i].second == color_v) return i;
    throw PreconditionError("reveal_pair_index: colors must be distinct values in {1,2,3}");
}

ChannelHandle build_g3c_interaction(const G3CInstance& inst, const G3CVerifierFamily& family,
                                    const CommitmentScheme& scheme) {
    require_distributional(scheme, "build_g3c_interaction");
    require_match(family, scheme, "build_g3c_interaction");
    if (!inst.colorable)
        throw PreconditionError("build_g3c_interaction: the analysis requires a colorable instance");
    const int n = inst.g.vertex_count();
    const int m = inst.m;
    const auto edge_list = inst.g.edges();
    const std::size_t y_dim = family.y_dim();
    const std::size_t alpha = family.vertex_alphabet.size();

    const RegisterLayout out_layout({{"W", family.dim_w},
                                     {"V", family.dim_v},
                                     {"A", static_cast<std::size_t>(m)},
                                     {"Y", y_dim},
                                     {"Z", kRevealPairs}});
    const RegisterLayout in_layout({{"W", family.dim_w}});

    const std::size_t w = family.dim_w;
    const std::size_t wv = w * family.dim_v;
    const auto color_perms = enumerate_group(3);

    // Per-color symbol probabilities.
    std::array<std::vector<double>, 3> probs;
    for (int c = 1; c <= 3; ++c) probs[c - 1] = symbol_probs(scheme, family.vertex_alphabet, c);

    // Message operators for every (composite message, edge).
    std::vector<ComplexMatrix> msg(y_dim * m);
    for (std::size_t y = 0; y < y_dim; ++y)
        for (int e = 0; e < m; ++e) msg[y * m + e] = g3c_message_operator(family, y, e);

    auto pos = [&](std::size_t r, int e, std::size_t y, int z) {
        return ((r * static_cast<std::size_t>(m) + static_cast<std::size_t>(e)) * y_dim + y) *
                   kRevealPairs +
               static_cast<std::size_t>(z);
    };

    std::vector<ComplexMatrix> units(w * w);
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) units[i * w + j] = ComplexMatrix(out_layout.total_dim(), out_layout.total_dim());

    for (const Permutation& pi : color_perms) {
        std::vector<int> colors(n);
        for (int v = 0; v < n; ++v) colors[v] = pi.apply(inst.witness.colors[v]);

        // Weight of each composite message under these committed colors.
        for (std::size_t y = 0; y < y_dim; ++y) {
            double weight = 1.0 / static_cast<double>(color_perms.size());
            std::size_t rem = y;
            for (int v = n - 1; v >= 0; --v) {
                weight *= probs[colors[v] - 1][rem % alpha];
                rem /= alpha;
            }
            if (weight == 0.0) continue;
            for (int e = 0; e < m; ++e) {
                const auto [eu, ev] = edge_list[e];
                const int z = reveal_pair_index(colors[eu - 1], colors[ev - 1]);
                const ComplexMatrix& op = msg[y * m + e];
                for (std::size_t i = 0; i < w; ++i)
                    for (std::size_t j = 0; j < w; ++j) {
                        ComplexMatrix& out = units[i * w + j];
                        for (std::size_t r1 = 0; r1 < wv; ++r1) {
                            const cplx mi = op(r1, i);
                            if (mi == cplx{0.0, 0.0}) continue;
                            for (std::size_t r2 = 0; r2 < wv; ++r2)
                                out(pos(r1, e, y, z), pos(r2, e, y, z)) +=
                                    weight * mi * std::conj(op(r2, j));
                        }
                    }
            }
        }
    }
    return ChannelHandle(in_layout, out_layout, std::move(units));
}

SimulatorAssembly assemble_g3c(const G3CInstance& inst, const G3CVerifierFamily& family,
                               const CommitmentScheme& scheme) {
    require_distributional(scheme, "assemble_g3c");
    require_match(family, scheme, "assemble_g3c");
    const int n = inst.g.vertex_count();
    const int m = inst.m;
    if (m < 1) throw PreconditionError("assemble_g3c: instance needs at least one edge");
    const auto edge_list = inst.g.edges();
    const std::size_t y_dim = family.y_dim();
    const int samples = scheme.sample_count();

    // Colorings that disagree on a fixed edge; the count is independent
    // of which edge it is.
    const auto colorings = all_colorings(n);
    std::vector<std::vector<int>> valid_for_edge(m);
    for (int e = 0; e < m; ++e) {
        const auto [eu, ev] = edge_list[e];
        for (std::size_t c = 0; c < colorings.size(); ++c)
            if (colorings[c][eu - 1] != colorings[c][ev - 1])
                valid_for_edge[e].push_back(static_cast<int>(c));
    }
    const std::size_t mu_count = valid_for_edge[0].size();

    std::size_t sample_combos = 1;
    for (int v = 0; v < n; ++v) sample_combos *= static_cast<std::size_t>(samples);
    const std::size_t d_r = static_cast<std::size_t>(m) * mu_count * sample_combos;

    const RegisterLayout layout({{"W", family.dim_w},
                                 {"V", family.dim_v},
                                 {"A", static_cast<std::size_t>(m)},
                                 {"Y", y_dim},
                                 {"B", static_cast<std::size_t>(m)},
                                 {"Z", kRevealPairs},
                                 {"R", d_r}});

    CVec target(y_dim * static_cast<std::size_t>(m) * kRevealPairs * d_r, cplx{0.0, 0.0});
    const double base = 1.0 / (static_cast<double>(m) * static_cast<double>(mu_count));
    std::vector<int> symbol_indices(n);
    for (int e = 0; e < m; ++e) {
        const auto [eu, ev] = edge_list[e];
        for (std::size_t mu_pos = 0; mu_pos < mu_count; ++mu_pos) {
            const auto& mu = colorings[valid_for_edge[e][mu_pos]];
            const int z = reveal_pair_index(mu[eu - 1], mu[ev - 1]);
            for (std::size_t x = 0; x < sample_combos; ++x) {
                double p = base;
                std::size_t rem = x;
                for (int v = n - 1; v >= 0; --v) {
                    const auto [sym, prob] = scheme.sample(mu[v], static_cast<int>(rem % samples));
                    symbol_indices[v] = sym;
                    p *= prob;
                    rem /= samples;
                }
                if (p == 0.0) continue;
                const std::size_t y = family.composite_index(symbol_indices);
                const std::size_t r =
                    (static_cast<std::size_t>(e) * mu_count + mu_pos) * sample_combos + x;
                const std::size_t sub =
                    ((y * static_cast<std::size_t>(m) + static_cast<std::size_t>(e)) *
                         kRevealPairs +
                     static_cast<std::size_t>(z)) *
                        d_r +
                    r;
                target[sub] = std::sqrt(p);
            }
        }
    }
    return SimulatorAssembly(layout, family.unitaries, std::move(target));
}

G3CSimulatorRun build_g3c_simulator(const G3CInstance& inst, const G3CVerifierFamily& family,
                                    const CommitmentScheme& scheme, int iterations) {
    const SimulatorAssembly assembly = assemble_g3c(inst, family, scheme);
    if (iterations <= 0) {
        // Derive the count from the worst success weight so the residual
        // failure lands under 1e-6.
        const auto spectrum = hermitian_eigenvalues(compress_success_operator(assembly));
        iterations = default_iteration_count(spectrum.front());
    }
    IteratedRun run = simulate_iterated(assembly, iterations, true);
    G3CSimulatorRun out;
    out.channel = std::move(run.conditional_channel);
    out.q_spectrum = std::move(run.q_spectrum);
    out.success_probs = std::move(run.success_probs);
    out.residual_failure = run.residual_failure;
    return out;
}

std::vector<double> q_spectrum_under_leak(const G3CInstance& inst,
                                          const G3CVerifierFamily& family, double epsilon) {
    const int fillers = static_cast<int>(family.vertex_alphabet.size()) - 3;
    if (fillers < 1)
        throw PreconditionError("q_spectrum_under_leak: family alphabet is not a leaky alphabet");
    const CommitmentScheme scheme = CommitmentScheme::leaky(epsilon, fillers);
    const SimulatorAssembly assembly = assemble_g3c(inst, family, scheme);
    return hermitian_eigenvalues(compress_success_operator(assembly));
}

namespace {

std::vector<std::string> sample_commitments(const G3CInstance& inst,
                                            const CommitmentScheme& scheme,
                                            const std::vector<int>& colors, Rng& rng,
                                            std::vector<std::string>* openings) {
    const int n = inst.g.vertex_count();
    std::vector<std::string> commitments(n);
    if (scheme.deterministic()) {
        for (int v = 0; v < n; ++v) {
            std::string x(scheme.security_parameter(), '0');
            for (char& c : x) c = (rng.next_u64() & 1) ? '1' : '0';
            commitments[v] = scheme.commit(colors[v], x);
            if (openings) (*openings)[v] = x;
        }
        return commitments;
    }
    for (int v = 0; v < n; ++v) {
        const auto dist = scheme.distribution(colors[v]).table;
        const double roll = rng.uniform();
        double acc = 0.0;
        commitments[v] = dist.back().first;
        for (const auto& [sym, p] : dist) {
            acc += p;
            if (roll < acc) {
                commitments[v] = sym;
                break;
            }
        }
    }
    return commitments;
}

int checked_edge(const EdgeChoice& choice, const std::vector<std::string>& commitments, int m) {
    const int e = choice(commitments);
    if (e < 0 || e >= m)
        throw PreconditionError("verifier edge choice out of range (decode to a valid edge)");
    return e;
}

} // namespace

G3CTranscript classical_g3c_round(const G3CInstance& inst, const CommitmentScheme& scheme,
                                  const EdgeChoice& verifier_edge_choice, std::uint64_t seed) {
    if (!scheme.deterministic())
        throw UnsupportedError("classical_g3c_round: the classical wire format needs string commitments");
    if (inst.m < 1) throw PreconditionError("classical_g3c_round: instance needs at least one edge");
    const int n = inst.g.vertex_count();
    Rng rng(seed);
    const auto color_perms = enumerate_group(3);
    const Permutation pi = color_perms[rng.below(color_perms.size())];

    std::vector<int> colors(n);
    for (int v = 0; v < n; ++v) colors[v] = pi.apply(inst.witness.colors[v]);

    G3CTranscript t;
    std::vector<std::string> openings(n);
    t.commitments = sample_commitments(inst, scheme, colors, rng, &openings);
    t.edge_index = checked_edge(verifier_edge_choice, t.commitments, inst.m);

    const auto [u, v] = inst.g.edges()[t.edge_index];
    t.color_u = colors[u - 1];
    t.color_v = colors[v - 1];
    t.opening_u = openings[u - 1];
    t.opening_v = openings[v - 1];
    t.accept = scheme.verify_opening(t.commitments[u - 1], t.color_u, t.opening_u) &&
               scheme.verify_opening(t.commitments[v - 1], t.color_v, t.opening_v) &&
               t.color_u != t.color_v;
    return t;
}

G3CSoundness classical_g3c_soundness(const G3CInstance& inst, const CommitmentScheme& scheme,
                                     int rounds) {
    if (!scheme.deterministic() || scheme.broken())
        throw PreconditionError("classical_g3c_soundness: a binding scheme is required");
    if (rounds < 1) throw PreconditionError("classical_g3c_soundness: rounds must be >= 1");
    const ColoringScore score = best_coloring_score(inst.g);
    G3CSoundness out;
    out.per_round = Rational{score.best_edges, std::max<long>(score.total_edges, 1)};
    out.rounds = rounds;
    out.multi_round_bound = std::pow(out.per_round.value(), rounds);
    return out;
}

G3CSimRound classical_g3c_simulator_round(const G3CInstance& inst, const CommitmentScheme& scheme,
                                          const EdgeChoice& verifier_edge_choice,
                                          std::uint64_t seed) {
    if (inst.m < 1) throw PreconditionError("classical_g3c_simulator_round: instance needs an edge");
    const int n = inst.g.vertex_count();
    Rng rng(seed);
    const auto edge_list = inst.g.edges();
    const int guess = static_cast<int>(rng.below(static_cast<std::uint64_t>(inst.m)));
    const auto [gu, gv] = edge_list[guess];

    // Uniform coloring subject to disagreeing on the guessed edge.
    const auto colorings = all_colorings(n);
    std::vector<int> valid;
    for (std::size_t c = 0; c < colorings.size(); ++c)
        if (colorings[c][gu - 1] != colorings[c][gv - 1]) valid.push_back(static_cast<int>(c));
    const auto& mu = colorings[valid[rng.below(valid.size())]];

    G3CSimRound round;
    std::vector<std::string> openings(n);
    round.transcript.commitments =
        sample_commitments(inst, scheme, mu, rng, scheme.deterministic() ? &openings : nullptr);
    round.transcript.edge_index =
        checked_edge(verifier_edge_choice, round.transcript.commitments, inst.m);
    round.success = (round.transcript.edge_index == guess);

    const auto [u, v] = edge_list[round.transcript.edge_index];
    round.transcript.color_u = mu[u - 1];
    round.transcript.color_v = mu[v - 1];
    if (scheme.deterministic()) {
        round.transcript.opening_u = openings[u - 1];
        round.transcript.opening_v = openings[v - 1];
    }
    round.transcript.accept = round.success && mu[u - 1] != mu[v - 1];
    return round;
}

SimulatorTally classical_g3c_simulator_exhaustive(const G3CInstance& inst,
                                                  const CommitmentScheme& scheme,
                                                  const EdgeChoice& verifier_edge_choice) {
    require_distributional(scheme, "classical_g3c_simulator_exhaustive");
    if (inst.m < 1) throw PreconditionError("simulator enumeration: instance needs an edge");
    const int n = inst.g.vertex_count();
    const int m = inst.m;
    const auto edge_list = inst.g.edges();
    const auto colorings = all_colorings(n);
    const auto alphabet = scheme.support_alphabet();
    const int samples = scheme.sample_count();
    std::size_t sample_combos = 1;
    for (int v = 0; v < n; ++v) sample_combos *= static_cast<std::size_t>(samples);

    SimulatorTally tally;
    std::vector<std::string> commitments(n);
    double success_weight = 0.0;
    for (int guess = 0; guess < m; ++guess) {
        const auto [gu, gv] = edge_list[guess];
        std::vector<const std::vector<int>*> valid;
        for (const auto& mu : colorings)
            if (mu[gu - 1] != mu[gv - 1]) valid.push_back(&mu);
        const double base = 1.0 / (static_cast<double>(m) * static_cast<double>(valid.size()));
        for (const auto* mu : valid) {
            for (std::size_t x = 0; x < sample_combos; ++x) {
                double p = base;
                std::size_t rem = x;
                for (int v = n - 1; v >= 0; --v) {
                    const auto [sym, prob] =
                        scheme.sample((*mu)[v], static_cast<int>(rem % samples));
                    commitments[v] = alphabet[sym];
                    p *= prob;
                    rem /= samples;
                }
                if (p == 0.0) continue;
                tally.total_weight += p;
                const int asked = checked_edge(verifier_edge_choice, commitments, m);
                if (asked == guess) {
                    success_weight += p;
                    tally.revealed_pair_weights[reveal_pair_index((*mu)[gu - 1], (*mu)[gv - 1])] +=
                        p;
                }
            }
        }
    }
    tally.success_probability = success_weight / tally.total_weight;
    return tally;
}

} // namespace qzk
