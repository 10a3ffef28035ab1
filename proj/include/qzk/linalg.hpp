#pragma once

#include <cstdint>
#include <vector>

#include "qzk/complex_matrix.hpp"
#include "qzk/register_layout.hpp"

namespace qzk {

struct EigenSystem {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // orthonormal columns, values[i] <-> column i
};

// Eigendecomposition of a Hermitian matrix. The input is symmetrized
// before decomposition; a hermiticity defect beyond the eigensolver
// tolerance throws ContractError.
EigenSystem hermitian_eigensystem(const ComplexMatrix& m);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

std::vector<double> singular_values(const ComplexMatrix& m);

// Sum of singular values. Hermitian inputs (all uses in the protocol
// distance measures) take the exact |eigenvalue|-sum path; the general
// path goes through the singular values.
double trace_norm(const ComplexMatrix& m);

// Deterministic seeded generator (splitmix64 + Box-Muller). Not a std
// engine so that streams are identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64();
    double uniform();           // (0,1)
    double gaussian();          // standard normal
    std::uint64_t below(std::uint64_t n); // uniform in [0,n)

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stable derived seed for the salt-th member of a seeded family.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Haar-like unitary: seeded complex-Gaussian matrix orthonormalized by
// modified Gram-Schmidt with positive-real diagonal factors.
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

CVec random_unit_vector(std::size_t dim, std::uint64_t seed);

// Unitary completion T with T|0...0> = target: a rotation inside the
// two-dimensional span of |0...0> and the target, identity on the
// orthogonal complement. Applications cost O(support) which keeps the
// big simulator preparations cheap.
class StatePrep {
  public:
    explicit StatePrep(CVec target); // target must be normalized

    std::size_t dim() const { return target_.size(); }
    const CVec& target() const { return target_; }

    void apply(CVec& v, bool adjoint = false) const; // v lives on the prep space
    ComplexMatrix dense() const;

    // Nonzero components of the span complement direction, used by the
    // embedded application below.
    const std::vector<std::pair<std::size_t, cplx>>& ortho_support() const { return u2_; }
    cplx overlap() const { return s_; }
    double complement_weight() const { return c_; }

  private:
    CVec target_;
    cplx s_;   // <0|target>
    double c_; // sqrt(1 - |s|^2)
    std::vector<std::pair<std::size_t, cplx>> u2_;
};

// Applies the prep unitary on the named consecutive-in-meaning target
// registers of a full layout vector (targets may sit anywhere in the
// layout; cost is O(outer_dim * support)).
void apply_prep(const StatePrep& prep, const std::vector<std::size_t>& target_regs,
                const RegisterLayout& layout, CVec& v, bool adjoint = false);

} // namespace qzk
