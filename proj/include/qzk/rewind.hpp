#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qzk/channel.hpp"
#include "qzk/complex_matrix.hpp"
#include "qzk/linalg.hpp"
#include "qzk/protocol_gi.hpp"
#include "qzk/register_layout.hpp"

namespace qzk {

// Everything the rewinding simulator needs, bound to one register layout
// (W, V, A, Y, B, Z, R):
//   - the preparation unitary T on (Y, B, Z, R), held as a structured
//     rotation so that large preparations stay cheap to apply;
//   - the Y-controlled verifier unitary acting on (W, V, A);
//   - the agreement test {Pi_0, Pi_1} comparing A and B;
//   - the all-zero-ancilla projectors {Delta_0, Delta_1} on everything
//     except W.
// The assembly is immutable after construction and safe to share.
class SimulatorAssembly {
  public:
    SimulatorAssembly(RegisterLayout layout, std::vector<ComplexMatrix> verifier_blocks,
                      CVec prep_target);

    const RegisterLayout& layout() const { return layout_; }
    std::size_t dim_w() const { return layout_.reg(0).dim; }
    std::size_t full_dim() const { return layout_.total_dim(); }
    const StatePrep& prep() const { return prep_; }
    const std::vector<ComplexMatrix>& verifier_blocks() const { return blocks_; }

    void apply_prep(CVec& v, bool adjoint = false) const;
    void apply_verifier(CVec& v, bool adjoint = false) const;
    void apply_u(CVec& v, bool adjoint = false) const; // U = V T

    void project_agree(CVec& v, int outcome) const;   // Pi_outcome (A vs B)
    void project_ancilla(CVec& v, int outcome) const; // Delta_outcome
    void reflect_ancilla(CVec& v) const;              // Delta_0 - Delta_1

    CVec initial_vector(const CVec& psi_w) const; // |psi> (x) |0_X>
    CVec basis_initial(std::size_t i) const;

    RegisterLayout output_layout() const; // (W, V, A, Y, Z)
    const std::vector<std::string>& traced_names() const { return traced_; }

  private:
    RegisterLayout layout_;
    std::vector<ComplexMatrix> blocks_;
    StatePrep prep_;
    std::vector<std::string> traced_;
    std::vector<std::size_t> verifier_regs_; // W, V, A
    std::vector<std::size_t> prep_regs_;     // Y, B, Z, R
    std::size_t y_reg_ = 3;
    std::size_t stride_w_ = 1;
    std::size_t a_stride_ = 1, b_stride_ = 1, ab_dim_ = 1;
};

// GI simulator assembly; the preparation target superposes the prover's
// graph choice, the guessed answer bit, the reply permutation, and the
// purifying randomness record.
SimulatorAssembly assemble_gi(const GIInstance& inst, const VerifierFamily& family);

struct AssemblyReport {
    double prep_unitarity = 0.0;     // probe-based ||T*T v - v|| and norm drift
    double verifier_unitarity = 0.0;
    double prep_target_residual = 0.0; // ||T|0> - target||
    bool ok = false;
};

AssemblyReport check_assembly(const SimulatorAssembly& assembly, std::uint64_t probe_seed);

// Compressed success operator Q on W:
//   Q = (I (x) <0_X|) T* V* Pi_0 V T (I (x) |0_X>).
// {Q, I-Q} is the measurement effectively applied to the auxiliary
// register by one simulator pass.
ComplexMatrix compress_success_operator(const SimulatorAssembly& assembly);

// --- two-dimensional rewinding rotation -----------------------------------

struct RotationResiduals {
    double eigenvector = 0.0; // ||Delta0 U* Pi0 U Delta0 g - lambda g||
    double ortho_inputs = 0.0;
    double ortho_outputs = 0.0;
    double forward0 = 0.0, forward1 = 0.0;
    double adjoint0 = 0.0, adjoint1 = 0.0;
    double max_identity_residual() const;
};

// The invariant-plane data of one rewinding step: U rotates the plane
// spanned by the two input vectors onto the plane spanned by the success
// and failure vectors, with mixing angle acos(sqrt(lambda)).
struct RewindRotation {
    double lambda = 0.0;
    CVec input_main;  // the Delta_0-eigenvector seed
    CVec input_ortho; // its partner in the input plane
    CVec success;     // normalized Pi_0 component of U(input_main)
    CVec failure;     // normalized Pi_1 component
    RotationResiduals residuals;
};

// Operator access used by the decomposition; adapters below cover dense
// matrices and simulator assemblies.
struct RotationOps {
    std::function<void(CVec&)> u, u_adj, pi0, pi1, delta0, delta1;
};

RotationOps dense_rotation_ops(ComplexMatrix u, ComplexMatrix pi0, ComplexMatrix delta0);
RotationOps assembly_rotation_ops(const SimulatorAssembly& assembly);

// Decomposes around a unit eigenvector of Delta0 U* Pi0 U Delta0 with
// eigenvalue strictly inside (0,1); throws PreconditionError when the
// eigenvalue is outside the safe window or the eigenvector residual is
// too large.
RewindRotation decompose_rotation(const RotationOps& ops, const CVec& seed);

// --- simulator channels ----------------------------------------------------

// One pass of the rewinding simulator: prepare, interact, test agreement;
// on failure undo, phase-flip the ancilla, redo, then output with the
// guess and randomness registers traced out. Output on (W, V, A, Y, Z).
ChannelHandle simulate_single_shot(const SimulatorAssembly& assembly);

struct IteratedRun {
    std::vector<double> success_probs; // conditional on reaching each iteration
    double residual_failure = 0.0;     // mass never accepted after k iterations
    std::vector<double> q_spectrum;
    ChannelHandle conditional_channel; // success-conditioned, renormalized
};

// The iterated procedure: measure, and on failure undo + reflect + redo,
// up to `iterations` attempts. Probabilities are reported for the
// maximally mixed auxiliary input.
IteratedRun simulate_iterated(const SimulatorAssembly& assembly, int iterations,
                              bool build_channel = true);

// Smallest k with (1-lambda)(1-4 lambda (1-lambda))^(k-1) <= target.
int default_iteration_count(double lambda, double target_residual = 1e-6);

} // namespace qzk
