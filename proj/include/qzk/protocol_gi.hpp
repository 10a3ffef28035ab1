#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qzk/channel.hpp"
#include "qzk/complex_matrix.hpp"
#include "qzk/graphs.hpp"

namespace qzk {

struct GIInstance {
    Graph g0;
    Graph g1;
    // sigma(g1) = g0 when isomorphic, identity otherwise.
    Permutation sigma = Permutation::identity(1);
    bool isomorphic = false;

    // Brute-force witness search; the first isomorphism in enumeration
    // order is taken.
    static GIInstance make(const Graph& g0, const Graph& g1);
};

// Restricted-form verifier for graph isomorphism: one unitary per
// possible first message H, acting on (W, V, A) with A a single qubit.
// A is measured in the standard basis after the unitary.
struct VerifierFamily {
    std::size_t dim_w = 2;
    std::size_t dim_v = 2;
    std::vector<Graph> y_basis;           // distinct graphs indexing register Y
    std::vector<ComplexMatrix> unitaries; // aligned with y_basis, dim w*v*2
    std::uint64_t seed = 0;               // generator seed (0 for handcrafted families)

    std::size_t index_of(const Graph& h) const; // throws when H is not in the basis
    const ComplexMatrix& unitary_for(const Graph& h) const;
};

// Seeded family over the relabeling orbit of g0 (or all graphs on n
// vertices when full_basis is set). Unitaries are regenerated from the
// seed, never stored externally.
VerifierFamily seeded_family(const GIInstance& inst, std::size_t dim_w, std::size_t dim_v,
                             std::uint64_t seed, bool full_basis = false);

// Family with every V_H a fixed unitary (identity by default); handy for
// closed-form checks.
VerifierFamily constant_family(const GIInstance& inst, std::size_t dim_w, std::size_t dim_v,
                               const ComplexMatrix& v_h, bool full_basis = false);

// JSON manifest (n, y-basis bitmasks, dims, seed); unitaries are
// regenerated from the seed on load.
std::string family_manifest(const VerifierFamily& family, int n);
VerifierFamily family_from_manifest(const std::string& json);

// M_{H,a} = (I (x) <a|) V_H (I (x) |0_VA>), mapping W to W (x) V. For
// every H the two outcomes satisfy sum_a M*M = I.
ComplexMatrix message_operator(const VerifierFamily& family, const Graph& h, int a);

RegisterLayout interaction_output_layout(const GIInstance& inst, const VerifierFamily& family);

// The admissible map of the real interaction, evaluated term by term
// from the message operators: mix over the prover's permutation, attach
// the answer bit, the sent graph, and the reply permutation.
ChannelHandle build_phi_direct(const GIInstance& inst, const VerifierFamily& family);

// Independent construction that simulates the message flow step by step
// (embed the verifier unitary, dephase the answer register, write the
// reply); used as a mutual oracle against build_phi_direct.
ChannelHandle build_phi_engine(const GIInstance& inst, const VerifierFamily& family);

struct GITranscript {
    Graph h;
    int a = 0;
    Permutation tau = Permutation::identity(1);
    bool accept = false;
};

// One honest-prover round against a caller-supplied verifier bit choice.
GITranscript classical_round(const GIInstance& inst,
                             const std::function<int(const Graph&)>& verifier_choice,
                             std::uint64_t prover_seed);

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

// Exhaustive optimum over first messages and response pairs; 1/2 for
// every non-isomorphic pair, 1 for isomorphic ones.
Rational optimal_cheating_value(const GIInstance& inst);

} // namespace qzk
