#include "qzk/state.hpp"

#include <cmath>

#include "qzk/config.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"

namespace qzk {

StateVector::StateVector(RegisterLayout l, CVec a) : layout(std::move(l)), amps(std::move(a)) {
    if (amps.size() != layout.total_dim())
        throw PreconditionError("StateVector: amplitude count does not match layout");
}

double StateVector::norm() const { return std::sqrt(norm_sq(amps)); }

StateVector basis_state(const RegisterLayout& layout, std::size_t index) {
    if (index >= layout.total_dim()) throw PreconditionError("basis_state: index out of range");
    CVec amps(layout.total_dim(), cplx{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(layout, std::move(amps));
}

StateVector random_state(const RegisterLayout& layout, std::uint64_t seed) {
    return StateVector(layout, random_unit_vector(layout.total_dim(), seed));
}

void ensure_normalized(const StateVector& psi) {
    if (std::abs(psi.norm() - 1.0) > tolerances().structural)
        throw ContractError("state vector is not normalized");
}

DensityOperator::DensityOperator(RegisterLayout l, ComplexMatrix m)
    : layout(std::move(l)), mat(std::move(m)) {
    if (!mat.square() || mat.rows() != layout.total_dim())
        throw PreconditionError("DensityOperator: matrix does not match layout");
}

DensityOperator pure_density(const StateVector& psi) {
    const std::size_t d = psi.amps.size();
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = psi.amps[r] * std::conj(psi.amps[c]);
    return DensityOperator(psi.layout, std::move(m));
}

DensityOperator maximally_mixed(const RegisterLayout& layout) {
    const std::size_t d = layout.total_dim();
    ComplexMatrix m = ComplexMatrix::identity(d);
    m *= cplx{1.0 / static_cast<double>(d), 0.0};
    return DensityOperator(layout, std::move(m));
}

DensityCheck check_density(const DensityOperator& rho, bool unit_trace) {
    DensityCheck out;
    ensure_finite(rho.mat, "density operator");
    out.hermiticity = hermiticity_defect(rho.mat);
    const auto eigs = hermitian_eigenvalues(rho.mat);
    out.min_eigenvalue = eigs.empty() ? 0.0 : eigs.front();
    const double tr = rho.trace_real();
    out.trace_deviation = unit_trace ? std::abs(tr - 1.0) : std::max(0.0, tr - 1.0);
    const double tol = tolerances().structural;
    out.ok = out.hermiticity <= tol && out.min_eigenvalue >= -tol && out.trace_deviation <= tol;
    return out;
}

void ensure_density(const DensityOperator& rho, bool unit_trace) {
    if (!check_density(rho, unit_trace).ok)
        throw ContractError("operator violates density-operator invariants");
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    return kron(a, b);
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const std::vector<std::string>& targets,
                             const RegisterLayout& layout) {
    return embed_dense(op, targets, layout);
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& discard) {
    if (discard.empty()) return rho;
    ComplexMatrix reduced = partial_trace_dense(rho.mat, rho.layout, discard);
    return DensityOperator(rho.layout.without(discard), std::move(reduced));
}

ComplexMatrix state_preparation_unitary(const StateVector& target) {
    ensure_normalized(target);
    return StatePrep(target.amps).dense();
}

} // namespace qzk
