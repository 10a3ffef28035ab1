#include "qzk/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qzk/config.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"

namespace qzk {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    return e;
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    return out;
}

void check_hermitian(const ComplexMatrix& m) {
    if (!m.square()) throw PreconditionError("hermitian_eigensystem: matrix not square");
    ensure_finite(m, "hermitian_eigensystem");
    const double scale = std::max(1.0, m.max_abs());
    if (hermiticity_defect(m) > tolerances().eigensolver * scale)
        throw ContractError("hermitian_eigensystem: input is not Hermitian within tolerance");
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
    check_hermitian(m);
    const Eigen::MatrixXcd e = to_eigen(symmetrized(m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
    if (solver.info() != Eigen::Success)
        throw ContractError("hermitian_eigensystem: eigensolver failed to converge");
    EigenSystem out;
    const std::size_t n = m.rows();
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
        for (std::size_t r = 0; r < n; ++r)
            out.vectors(r, i) = solver.eigenvectors()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    check_hermitian(m);
    const Eigen::MatrixXcd e = to_eigen(symmetrized(m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ContractError("hermitian_eigenvalues: eigensolver failed to converge");
    std::vector<double> values(m.rows());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return values;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    ensure_finite(m, "singular_values");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    std::vector<double> out(svd.singularValues().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
    return out;
}

double trace_norm(const ComplexMatrix& m) {
    if (!m.square()) throw PreconditionError("trace_norm: matrix not square");
    const double scale = std::max(1.0, m.max_abs());
    double sum = 0.0;
    if (hermiticity_defect(m) <= 1e-10 * scale) {
        for (double v : hermitian_eigenvalues(m)) sum += std::abs(v);
    } else {
        for (double v : singular_values(m)) sum += v;
    }
    return sum;
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    // 53-bit mantissa, shifted into the open interval (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw PreconditionError("Rng::below: empty range");
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (salt + 1));
    return splitmix64(state);
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim < 1) throw PreconditionError("random_unitary: dimension must be >= 1");
    ensure_within_cap(dim, "random_unitary");
    Rng rng(seed);
    ComplexMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            g(r, c) = cplx{rng.gaussian(), rng.gaussian()} * (1.0 / std::sqrt(2.0));

    // Modified Gram-Schmidt over columns, one reorthogonalization pass.
    // Column norms (the R diagonal) are positive real, which fixes the
    // phase convention.
    for (std::size_t c = 0; c < dim; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < c; ++p) {
                cplx ip{0.0, 0.0};
                for (std::size_t r = 0; r < dim; ++r) ip += std::conj(g(r, p)) * g(r, c);
                for (std::size_t r = 0; r < dim; ++r) g(r, c) -= ip * g(r, p);
            }
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(g(r, c));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12)
            throw ContractError("random_unitary: degenerate Gaussian sample");
        for (std::size_t r = 0; r < dim; ++r) g(r, c) /= nrm;
    }
    return g;
}

CVec random_unit_vector(std::size_t dim, std::uint64_t seed) {
    if (dim < 1) throw PreconditionError("random_unit_vector: dimension must be >= 1");
    Rng rng(seed);
    CVec v(dim);
    double nrm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = cplx{rng.gaussian(), rng.gaussian()};
        nrm += std::norm(v[i]);
    }
    nrm = std::sqrt(nrm);
    for (cplx& a : v) a /= nrm;
    return v;
}

StatePrep::StatePrep(CVec target) : target_(std::move(target)) {
    if (target_.empty()) throw PreconditionError("StatePrep: empty target");
    const double nrm = std::sqrt(norm_sq(target_));
    if (std::abs(nrm - 1.0) > tolerances().structural * 10)
        throw ContractError("StatePrep: target is not normalized");
    s_ = target_[0];
    const double c2 = std::max(0.0, 1.0 - std::norm(s_));
    c_ = std::sqrt(c2);
    if (c_ > 1e-12) {
        for (std::size_t i = 1; i < target_.size(); ++i) {
            const cplx val = target_[i] / c_;
            if (val != cplx{0.0, 0.0}) u2_.emplace_back(i, val);
        }
    } else {
        // Target is |0> up to phase; the rotation degenerates to that phase.
        c_ = 0.0;
        const double mag = std::abs(s_);
        s_ = (mag > 0.0) ? s_ / mag : cplx{1.0, 0.0};
    }
}

void StatePrep::apply(CVec& v, bool adjoint) const {
    if (v.size() != target_.size()) throw PreconditionError("StatePrep::apply: length mismatch");
    const cplx a = v[0];
    if (c_ == 0.0) {
        v[0] = adjoint ? std::conj(s_) * a : s_ * a;
        return;
    }
    cplx b{0.0, 0.0};
    for (const auto& [i, val] : u2_) b += std::conj(val) * v[i];
    cplx na, nb;
    if (adjoint) {
        na = std::conj(s_) * a + c_ * b;
        nb = -c_ * a + s_ * b;
    } else {
        na = s_ * a - c_ * b;
        nb = c_ * a + std::conj(s_) * b;
    }
    v[0] += na - a;
    const cplx db = nb - b;
    for (const auto& [i, val] : u2_) v[i] += val * db;
}

ComplexMatrix StatePrep::dense() const {
    const std::size_t d = target_.size();
    ensure_within_cap(d, "StatePrep::dense");
    ComplexMatrix out(d, d);
    CVec col(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
        col[j] = 1.0;
        apply(col);
        for (std::size_t r = 0; r < d; ++r) out(r, j) = col[r];
    }
    return out;
}

void apply_prep(const StatePrep& prep, const std::vector<std::size_t>& target_regs,
                const RegisterLayout& layout, CVec& v, bool adjoint) {
    if (v.size() != layout.total_dim()) throw PreconditionError("apply_prep: vector length mismatch");
    std::size_t sub_dim = 1;
    for (std::size_t r : target_regs) sub_dim *= layout.reg(r).dim;
    if (sub_dim != prep.dim()) throw PreconditionError("apply_prep: target dimension mismatch");

    // Flat offsets of the rotation support within the layout.
    auto offset_of = [&](std::size_t sub) {
        std::size_t off = 0;
        for (std::size_t i = target_regs.size(); i-- > 0;) {
            const std::size_t d = layout.reg(target_regs[i]).dim;
            off += (sub % d) * layout.stride(target_regs[i]);
            sub /= d;
        }
        return off;
    };
    std::vector<std::pair<std::size_t, cplx>> support;
    support.reserve(prep.ortho_support().size());
    for (const auto& [i, val] : prep.ortho_support()) support.emplace_back(offset_of(i), val);

    const SubsetIndexer outer = subset_indexer(layout, target_regs);

    const cplx s = prep.overlap();
    const double c = prep.complement_weight();
#pragma omp parallel for schedule(static)
    for (long long o = 0; o < static_cast<long long>(outer.outer_offsets.size()); ++o) {
        const std::size_t base = outer.outer_offsets[static_cast<std::size_t>(o)];
        const cplx a = v[base];
        if (c == 0.0) {
            v[base] = adjoint ? std::conj(s) * a : s * a;
            continue;
        }
        cplx b{0.0, 0.0};
        for (const auto& [off, val] : support) b += std::conj(val) * v[base + off];
        cplx na, nb;
        if (adjoint) {
            na = std::conj(s) * a + c * b;
            nb = -c * a + s * b;
        } else {
            na = s * a - c * b;
            nb = c * a + std::conj(s) * b;
        }
        v[base] += na - a;
        const cplx db = nb - b;
        for (const auto& [off, val] : support) v[base + off] += val * db;
    }
}

} // namespace qzk
