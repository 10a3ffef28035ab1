#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qzk/channel.hpp"
#include "qzk/commitment.hpp"
#include "qzk/graphs.hpp"
#include "qzk/protocol_gi.hpp"
#include "qzk/rewind.hpp"

namespace qzk {

struct G3CInstance {
    Graph g;
    int m = 0;               // edge count
    ColorAssignment witness; // valid 3-coloring when colorable, all-1 otherwise
    bool colorable = false;

    static G3CInstance make(const Graph& g);
    static G3CInstance make_with_witness(const Graph& g, const ColorAssignment& witness);
};

// Restricted verifier for one G3C iteration: a unitary per commitment
// message y (the n per-vertex symbols as one composite index) on
// (W, V, A), followed by a standard-basis measurement of the edge
// register A (dim = edge count).
struct G3CVerifierFamily {
    std::size_t dim_w = 2;
    std::size_t dim_v = 2;
    int n = 0;
    int m = 0;
    std::vector<std::string> vertex_alphabet; // per-vertex commitment symbols
    std::vector<ComplexMatrix> unitaries;     // |alphabet|^n blocks of dim w*v*m
    std::uint64_t seed = 0;

    std::size_t y_dim() const;
    std::size_t composite_index(const std::vector<int>& symbol_indices) const;
};

// Family whose message alphabet is tied to the scheme's support; the
// verifier unitaries are regenerated from the seed.
G3CVerifierFamily seeded_g3c_family(const G3CInstance& inst, const CommitmentScheme& scheme,
                                    std::size_t dim_w, std::size_t dim_v, std::uint64_t seed);

// Ordered distinct color pairs (1,2),(1,3),(2,1),(2,3),(3,1),(3,2)
// indexing the reveal register.
inline constexpr int kRevealPairs = 6;
int reveal_pair_index(int color_u, int color_v);

// The admissible map of one real iteration: mix over the prover's color
// permutation and the commitment-string distribution, apply V_y, measure
// the edge register, and append the opened colors. Output on
// (W, V, A, Y, Z).
ChannelHandle build_g3c_interaction(const G3CInstance& inst, const G3CVerifierFamily& family,
                                    const CommitmentScheme& scheme);

// Rewinding assembly for the G3C simulator: the preparation superposes
// the edge guess, the constrained coloring, and the commitment sampling,
// with the purifying record in R; the agreement test compares the edge
// registers.
SimulatorAssembly assemble_g3c(const G3CInstance& inst, const G3CVerifierFamily& family,
                               const CommitmentScheme& scheme);

struct G3CSimulatorRun {
    ChannelHandle channel; // success-conditioned output channel
    std::vector<double> q_spectrum;
    std::vector<double> success_probs;
    double residual_failure = 0.0;
};

// iterations <= 0 derives the count from the success spectrum so the
// residual failure drops below 1e-6.
G3CSimulatorRun build_g3c_simulator(const G3CInstance& inst, const G3CVerifierFamily& family,
                                    const CommitmentScheme& scheme, int iterations);

// Spectrum of the compressed success operator when the commitment
// strings leak the committed value with probability epsilon.
std::vector<double> q_spectrum_under_leak(const G3CInstance& inst,
                                          const G3CVerifierFamily& family, double epsilon);

// --- classical engines -----------------------------------------------------

using EdgeChoice = std::function<int(const std::vector<std::string>&)>;

struct G3CTranscript {
    std::vector<std::string> commitments;
    int edge_index = 0;
    int color_u = 0, color_v = 0;
    std::string opening_u, opening_v; // empty for distributional schemes
    bool accept = false;
};

G3CTranscript classical_g3c_round(const G3CInstance& inst, const CommitmentScheme& scheme,
                                  const EdgeChoice& verifier_edge_choice, std::uint64_t seed);

struct G3CSoundness {
    Rational per_round; // best satisfiable edge fraction over all assignments
    double multi_round_bound = 0.0;
    int rounds = 0;
};

// Binding commitments pin one assignment per round, so the optimal
// cheating probability per round is the best coloring score.
G3CSoundness classical_g3c_soundness(const G3CInstance& inst, const CommitmentScheme& scheme,
                                     int rounds);

struct G3CSimRound {
    G3CTranscript transcript;
    bool success = false; // verifier asked exactly the guessed edge
};

G3CSimRound classical_g3c_simulator_round(const G3CInstance& inst, const CommitmentScheme& scheme,
                                          const EdgeChoice& verifier_edge_choice,
                                          std::uint64_t seed);

struct SimulatorTally {
    double success_probability = 0.0;
    double total_weight = 0.0;
    std::array<double, kRevealPairs> revealed_pair_weights{}; // successful rounds only
};

// Exact enumeration of the simulator's randomness (guess, coloring,
// commitment sampling) against a fixed verifier callback; distributional
// schemes only.
SimulatorTally classical_g3c_simulator_exhaustive(const G3CInstance& inst,
                                                  const CommitmentScheme& scheme,
                                                  const EdgeChoice& verifier_edge_choice);

} // namespace qzk
