#include "qzk/protocol_gi.hpp"

#include <json.hpp>
#include <map>

#include "qzk/config.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"

namespace qzk {

namespace {

std::map<std::vector<int>, int> permutation_index_map(const std::vector<Permutation>& perms) {
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i].images()] = static_cast<int>(i);
    return index;
}

void require_isomorphic(const GIInstance& inst, const char* what) {
    if (!inst.isomorphic)
        throw PreconditionError(std::string(what) +
                                ": the interaction analysis requires an isomorphic instance");
}

std::vector<Graph> basis_for(const GIInstance& inst, bool full_basis) {
    return full_basis ? all_graphs(inst.g0.vertex_count()) : graph_orbit(inst.g0);
}

} // namespace

GIInstance GIInstance::make(const Graph& g0, const Graph& g1) {
    GIInstance inst;
    inst.g0 = g0;
    inst.g1 = g1;
    auto sigma = find_isomorphism(g0, g1);
    inst.isomorphic = sigma.has_value();
    inst.sigma = sigma.value_or(Permutation::identity(g0.vertex_count()));
    return inst;
}

std::size_t VerifierFamily::index_of(const Graph& h) const {
    for (std::size_t i = 0; i < y_basis.size(); ++i)
        if (y_basis[i] == h) return i;
    throw PreconditionError("verifier family: graph is not in the message basis");
}

const ComplexMatrix& VerifierFamily::unitary_for(const Graph& h) const {
    return unitaries[index_of(h)];
}

VerifierFamily seeded_family(const GIInstance& inst, std::size_t dim_w, std::size_t dim_v,
                             std::uint64_t seed, bool full_basis) {
    VerifierFamily family;
    family.dim_w = dim_w;
    family.dim_v = dim_v;
    family.seed = seed;
    family.y_basis = basis_for(inst, full_basis);
    const std::size_t dim = dim_w * dim_v * 2;
    family.unitaries.reserve(family.y_basis.size());
    for (std::size_t i = 0; i < family.y_basis.size(); ++i)
        family.unitaries.push_back(random_unitary(dim, mix_seed(seed, i)));
    return family;
}

VerifierFamily constant_family(const GIInstance& inst, std::size_t dim_w, std::size_t dim_v,
                               const ComplexMatrix& v_h, bool full_basis) {
    if (!v_h.square() || v_h.rows() != dim_w * dim_v * 2)
        throw PreconditionError("constant_family: unitary has the wrong dimension");
    if ((matmul(v_h.adjoint(), v_h) - ComplexMatrix::identity(v_h.rows())).frobenius_norm() >
        tolerances().structural)
        throw ContractError("constant_family: supplied operator is not unitary");
    VerifierFamily family;
    family.dim_w = dim_w;
    family.dim_v = dim_v;
    family.y_basis = basis_for(inst, full_basis);
    family.unitaries.assign(family.y_basis.size(), v_h);
    return family;
}

std::string family_manifest(const VerifierFamily& family, int n) {
    if (family.seed == 0)
        throw UnsupportedError("family_manifest: only seeded families can be serialized");
    nlohmann::ordered_json j;
    j["n"] = n;
    std::vector<std::uint64_t> basis;
    for (const Graph& g : family.y_basis) basis.push_back(g.bits());
    j["y_basis"] = basis;
    j["dim_w"] = family.dim_w;
    j["dim_v"] = family.dim_v;
    j["seed"] = family.seed;
    return j.dump();
}

VerifierFamily family_from_manifest(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    VerifierFamily family;
    const int n = j.at("n").get<int>();
    family.dim_w = j.at("dim_w").get<std::size_t>();
    family.dim_v = j.at("dim_v").get<std::size_t>();
    family.seed = j.at("seed").get<std::uint64_t>();
    const std::size_t dim = family.dim_w * family.dim_v * 2;
    for (const auto& bits : j.at("y_basis")) {
        family.y_basis.emplace_back(n, bits.get<std::uint64_t>());
        family.unitaries.push_back(
            random_unitary(dim, mix_seed(family.seed, family.y_basis.size() - 1)));
    }
    return family;
}

ComplexMatrix message_operator(const VerifierFamily& family, const Graph& h, int a) {
    if (a != 0 && a != 1) throw PreconditionError("message_operator: answer bit must be 0 or 1");
    const ComplexMatrix& v_h = family.unitary_for(h);
    const std::size_t w = family.dim_w;
    const std::size_t wv = w * family.dim_v;
    ComplexMatrix m(wv, w);
    // Row (w', v') of M_{H,a} reads the (w', v', a) component of V_H
    // applied to |i, 0_V, 0_A>.
    for (std::size_t row = 0; row < wv; ++row)
        for (std::size_t i = 0; i < w; ++i)
            m(row, i) = v_h(row * 2 + static_cast<std::size_t>(a), i * family.dim_v * 2);
    return m;
}

RegisterLayout interaction_output_layout(const GIInstance& inst, const VerifierFamily& family) {
    const int n = inst.g0.vertex_count();
    std::size_t fact = 1;
    for (int i = 2; i <= n; ++i) fact *= static_cast<std::size_t>(i);
    return RegisterLayout({{"W", family.dim_w},
                           {"V", family.dim_v},
                           {"A", 2},
                           {"Y", family.y_basis.size()},
                           {"Z", fact}});
}

ChannelHandle build_phi_direct(const GIInstance& inst, const VerifierFamily& family) {
    require_isomorphic(inst, "build_phi_direct");
    const int n = inst.g0.vertex_count();
    const auto perms = enumerate_group(n);
    const auto perm_index = permutation_index_map(perms);
    const RegisterLayout out_layout = interaction_output_layout(inst, family);
    const RegisterLayout in_layout({{"W", family.dim_w}});

    const std::size_t w = family.dim_w;
    const std::size_t wv = w * family.dim_v;
    const std::size_t d_y = family.y_basis.size();
    const std::size_t d_z = perms.size();
    const double weight = 1.0 / static_cast<double>(perms.size());

    // Message operators per (basis graph, answer bit).
    std::vector<std::array<ComplexMatrix, 2>> msg(d_y);
    for (std::size_t y = 0; y < d_y; ++y)
        for (int a = 0; a < 2; ++a) msg[y][a] = message_operator(family, family.y_basis[y], a);

    auto pos = [&](std::size_t wv_row, int a, std::size_t y, std::size_t z) {
        return ((wv_row * 2 + static_cast<std::size_t>(a)) * d_y + y) * d_z + z;
    };

    std::vector<ComplexMatrix> units(w * w);
#pragma omp parallel for collapse(2) schedule(static)
    for (long long i = 0; i < static_cast<long long>(w); ++i)
        for (long long j = 0; j < static_cast<long long>(w); ++j) {
            ComplexMatrix out(out_layout.total_dim(), out_layout.total_dim());
            for (std::size_t p = 0; p < perms.size(); ++p) {
                const Graph h = apply_permutation(perms[p], inst.g0);
                const std::size_t y = family.index_of(h);
                for (int a = 0; a < 2; ++a) {
                    const Permutation tau =
                        (a == 0) ? perms[p] : compose(perms[p], inst.sigma);
                    const std::size_t z =
                        static_cast<std::size_t>(perm_index.at(tau.images()));
                    const ComplexMatrix& m = msg[y][a];
                    for (std::size_t r1 = 0; r1 < wv; ++r1) {
                        const cplx mi = m(r1, static_cast<std::size_t>(i));
                        if (mi == cplx{0.0, 0.0}) continue;
                        for (std::size_t r2 = 0; r2 < wv; ++r2)
                            out(pos(r1, a, y, z), pos(r2, a, y, z)) +=
                                weight * mi * std::conj(m(r2, static_cast<std::size_t>(j)));
                    }
                }
            }
            units[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)] = std::move(out);
        }
    return ChannelHandle(in_layout, out_layout, std::move(units));
}

ChannelHandle build_phi_engine(const GIInstance& inst, const VerifierFamily& family) {
    require_isomorphic(inst, "build_phi_engine");
    const int n = inst.g0.vertex_count();
    const auto perms = enumerate_group(n);
    const auto perm_index = permutation_index_map(perms);
    const RegisterLayout out_layout = interaction_output_layout(inst, family);
    const RegisterLayout in_layout({{"W", family.dim_w}});

    const std::size_t w = family.dim_w;
    const std::size_t wv = w * family.dim_v;
    const std::size_t wva = wv * 2;
    const std::size_t d_y = family.y_basis.size();
    const std::size_t d_z = perms.size();
    const double weight = 1.0 / static_cast<double>(perms.size());

    auto pos = [&](std::size_t wv_row, int a, std::size_t y, std::size_t z) {
        return ((wv_row * 2 + static_cast<std::size_t>(a)) * d_y + y) * d_z + z;
    };

    std::vector<ComplexMatrix> units(w * w);
#pragma omp parallel for collapse(2) schedule(static)
    for (long long i = 0; i < static_cast<long long>(w); ++i)
        for (long long j = 0; j < static_cast<long long>(w); ++j) {
            // |i><j| (x) |0_V 0_A><0_V 0_A| on the verifier's private space.
            ComplexMatrix start(wva, wva);
            start(static_cast<std::size_t>(i) * family.dim_v * 2,
                  static_cast<std::size_t>(j) * family.dim_v * 2) = 1.0;

            ComplexMatrix out(out_layout.total_dim(), out_layout.total_dim());
            for (std::size_t p = 0; p < perms.size(); ++p) {
                const Graph h = apply_permutation(perms[p], inst.g0);
                const std::size_t y = family.index_of(h);
                const ComplexMatrix& v_h = family.unitary_for(h);
                ComplexMatrix s = reference::matmul(reference::matmul(v_h, start), v_h.adjoint());
                // The verifier measures A: keep only the diagonal answer blocks.
                for (int a = 0; a < 2; ++a) {
                    const Permutation tau =
                        (a == 0) ? perms[p] : compose(perms[p], inst.sigma);
                    const std::size_t z =
                        static_cast<std::size_t>(perm_index.at(tau.images()));
                    for (std::size_t r1 = 0; r1 < wv; ++r1)
                        for (std::size_t r2 = 0; r2 < wv; ++r2)
                            out(pos(r1, a, y, z), pos(r2, a, y, z)) +=
                                weight * s(r1 * 2 + static_cast<std::size_t>(a),
                                           r2 * 2 + static_cast<std::size_t>(a));
                }
            }
            units[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)] = std::move(out);
        }
    return ChannelHandle(in_layout, out_layout, std::move(units));
}

GITranscript classical_round(const GIInstance& inst,
                             const std::function<int(const Graph&)>& verifier_choice,
                             std::uint64_t prover_seed) {
    const int n = inst.g0.vertex_count();
    const auto perms = enumerate_group(n);
    Rng rng(prover_seed);
    const Permutation pi = perms[rng.below(perms.size())];

    GITranscript t;
    t.h = apply_permutation(pi, inst.g0);
    t.a = verifier_choice(t.h);
    if (t.a != 0 && t.a != 1) throw PreconditionError("classical_round: verifier bit must be 0 or 1");
    t.tau = (t.a == 0) ? pi : compose(pi, inst.sigma);
    const Graph& g_a = (t.a == 0) ? inst.g0 : inst.g1;
    t.accept = apply_permutation(t.tau, g_a) == t.h;
    return t;
}

Rational optimal_cheating_value(const GIInstance& inst) {
    const int n = inst.g0.vertex_count();
    const auto perms = enumerate_group(n);
    // Images of both graphs under every possible response; the best first
    // message maximizes how many of the two checks can be satisfied.
    std::vector<std::uint64_t> img0, img1;
    for (const Permutation& tau : perms) {
        img0.push_back(apply_permutation(tau, inst.g0).bits());
        img1.push_back(apply_permutation(tau, inst.g1).bits());
    }
    long long best = 0;
    for (const Graph& h : all_graphs(n)) {
        const std::uint64_t bits = h.bits();
        long long count = 0;
        if (std::find(img0.begin(), img0.end(), bits) != img0.end()) ++count;
        if (std::find(img1.begin(), img1.end(), bits) != img1.end()) ++count;
        best = std::max(best, count);
    }
    return Rational{best, 2};
}

} // namespace qzk
