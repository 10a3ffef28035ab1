#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qzk/complex_matrix.hpp"
#include "qzk/register_layout.hpp"

namespace qzk {

// Pure state over a register layout.
struct StateVector {
    RegisterLayout layout;
    CVec amps;

    StateVector() = default;
    StateVector(RegisterLayout l, CVec a);

    double norm() const;
};

StateVector basis_state(const RegisterLayout& layout, std::size_t index);
StateVector random_state(const RegisterLayout& layout, std::uint64_t seed);

// Throws ContractError when the norm deviates from 1 beyond the
// structural tolerance.
void ensure_normalized(const StateVector& psi);

// Mixed state (possibly sub-normalized for conditional branches).
struct DensityOperator {
    RegisterLayout layout;
    ComplexMatrix mat;

    DensityOperator() = default;
    DensityOperator(RegisterLayout l, ComplexMatrix m);

    double trace_real() const { return mat.trace().real(); }
};

DensityOperator pure_density(const StateVector& psi);
DensityOperator maximally_mixed(const RegisterLayout& layout);

struct DensityCheck {
    double hermiticity = 0.0;   // max |rho - rho*|
    double min_eigenvalue = 0.0;
    double trace_deviation = 0.0; // |tr - 1|, or 0 when unit trace not required
    bool ok = false;
};

// Hermiticity/positivity/trace validation; `unit_trace` enforces trace 1,
// otherwise trace <= 1 is accepted.
DensityCheck check_density(const DensityOperator& rho, bool unit_trace = true);
void ensure_density(const DensityOperator& rho, bool unit_trace = true);

// --- quantum-core operations ----------------------------------------------

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix embed_operator(const ComplexMatrix& op, const std::vector<std::string>& targets,
                             const RegisterLayout& layout);

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& discard);

// Deterministic unitary completion with T|0...0> = target.
ComplexMatrix state_preparation_unitary(const StateVector& target);

} // namespace qzk
