#include "qzk/kernels.hpp"

#include <algorithm>

#include "qzk/config.hpp"
#include "qzk/error.hpp"

namespace qzk {

namespace {

constexpr std::size_t kDotChunks = 64;

std::vector<std::size_t> offsets_for(const RegisterLayout& layout,
                                     const std::vector<std::size_t>& regs) {
    std::size_t dim = 1;
    for (std::size_t r : regs) dim *= layout.reg(r).dim;
    std::vector<std::size_t> offsets(dim, 0);
    for (std::size_t s = 0; s < dim; ++s) {
        std::size_t rem = s;
        std::size_t off = 0;
        for (std::size_t i = regs.size(); i-- > 0;) {
            const std::size_t d = layout.reg(regs[i]).dim;
            off += (rem % d) * layout.stride(regs[i]);
            rem /= d;
        }
        offsets[s] = off;
    }
    return offsets;
}

} // namespace

SubsetIndexer subset_indexer(const RegisterLayout& layout,
                             const std::vector<std::size_t>& target_regs) {
    for (std::size_t r : target_regs) {
        if (r >= layout.size()) throw PreconditionError("subset_indexer: register index out of range");
        if (std::count(target_regs.begin(), target_regs.end(), r) != 1)
            throw PreconditionError("subset_indexer: repeated target register");
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < layout.size(); ++i)
        if (std::find(target_regs.begin(), target_regs.end(), i) == target_regs.end())
            rest.push_back(i);

    SubsetIndexer idx;
    idx.sub_offsets = offsets_for(layout, target_regs);
    idx.outer_offsets = offsets_for(layout, rest);
    idx.sub_dim = idx.sub_offsets.size();
    idx.outer_dim = idx.outer_offsets.size();
    return idx;
}

cplx dot(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw PreconditionError("dot: length mismatch");
    const std::size_t n = u.size();
    const std::size_t chunks = std::min<std::size_t>(kDotChunks, std::max<std::size_t>(n, 1));
    std::vector<cplx> partial(chunks, cplx{0.0, 0.0});
    // Chunk count is fixed, so the combine order below does not depend on
    // the number of threads.
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::size_t lo = n * c / chunks;
        const std::size_t hi = n * (c + 1) / chunks;
        cplx s{0.0, 0.0};
        for (std::size_t i = lo; i < hi; ++i) s += std::conj(u[i]) * v[i];
        partial[c] = s;
    }
    cplx total{0.0, 0.0};
    for (const cplx& p : partial) total += p;
    return total;
}

double norm_sq(const CVec& v) {
    const std::size_t n = v.size();
    const std::size_t chunks = std::min<std::size_t>(kDotChunks, std::max<std::size_t>(n, 1));
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::size_t lo = n * c / chunks;
        const std::size_t hi = n * (c + 1) / chunks;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::norm(v[i]);
        partial[c] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw PreconditionError("matmul: inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < static_cast<long long>(a.rows()); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx ark = a(static_cast<std::size_t>(r), k);
            if (ark == cplx{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c)
                out(static_cast<std::size_t>(r), c) += ark * b(k, c);
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ensure_within_cap(a.rows() * b.rows(), "tensor product rows");
    ensure_within_cap(a.cols() * b.cols(), "tensor product cols");
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.rows()); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(static_cast<std::size_t>(i), j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(static_cast<std::size_t>(i) * b.rows() + k, j * b.cols() + l) =
                        aij * b(k, l);
        }
    }
    return out;
}

void apply_embedded(const ComplexMatrix& op, const std::vector<std::size_t>& target_regs,
                    const RegisterLayout& layout, CVec& v, bool adjoint) {
    const SubsetIndexer idx = subset_indexer(layout, target_regs);
    if (!op.square() || op.rows() != idx.sub_dim)
        throw PreconditionError("apply_embedded: operator dimension mismatch");
    if (v.size() != layout.total_dim())
        throw PreconditionError("apply_embedded: vector length mismatch");
    const std::size_t d = idx.sub_dim;
#pragma omp parallel
    {
        CVec in(d), out(d);
#pragma omp for schedule(static)
        for (long long o = 0; o < static_cast<long long>(idx.outer_dim); ++o) {
            const std::size_t base = idx.outer_offsets[static_cast<std::size_t>(o)];
            for (std::size_t s = 0; s < d; ++s) in[s] = v[base + idx.sub_offsets[s]];
            for (std::size_t r = 0; r < d; ++r) {
                cplx acc{0.0, 0.0};
                if (adjoint) {
                    for (std::size_t c = 0; c < d; ++c) acc += std::conj(op(c, r)) * in[c];
                } else {
                    for (std::size_t c = 0; c < d; ++c) acc += op(r, c) * in[c];
                }
                out[r] = acc;
            }
            for (std::size_t s = 0; s < d; ++s) v[base + idx.sub_offsets[s]] = out[s];
        }
    }
}

void apply_controlled(const std::vector<ComplexMatrix>& blocks,
                      const std::vector<std::size_t>& target_regs, std::size_t control_reg,
                      const RegisterLayout& layout, CVec& v, bool adjoint) {
    if (control_reg >= layout.size())
        throw PreconditionError("apply_controlled: control register out of range");
    if (std::find(target_regs.begin(), target_regs.end(), control_reg) != target_regs.end())
        throw PreconditionError("apply_controlled: control register cannot be a target");
    if (blocks.size() != layout.reg(control_reg).dim)
        throw PreconditionError("apply_controlled: one block per control value required");
    const SubsetIndexer idx = subset_indexer(layout, target_regs);
    const std::size_t d = idx.sub_dim;
    for (const auto& b : blocks)
        if (!b.square() || b.rows() != d)
            throw PreconditionError("apply_controlled: block dimension mismatch");
    if (v.size() != layout.total_dim())
        throw PreconditionError("apply_controlled: vector length mismatch");
    const std::size_t cstride = layout.stride(control_reg);
    const std::size_t cdim = layout.reg(control_reg).dim;
#pragma omp parallel
    {
        CVec in(d), out(d);
#pragma omp for schedule(static)
        for (long long o = 0; o < static_cast<long long>(idx.outer_dim); ++o) {
            const std::size_t base = idx.outer_offsets[static_cast<std::size_t>(o)];
            const ComplexMatrix& op = blocks[(base / cstride) % cdim];
            for (std::size_t s = 0; s < d; ++s) in[s] = v[base + idx.sub_offsets[s]];
            for (std::size_t r = 0; r < d; ++r) {
                cplx acc{0.0, 0.0};
                if (adjoint) {
                    for (std::size_t c = 0; c < d; ++c) acc += std::conj(op(c, r)) * in[c];
                } else {
                    for (std::size_t c = 0; c < d; ++c) acc += op(r, c) * in[c];
                }
                out[r] = acc;
            }
            for (std::size_t s = 0; s < d; ++s) v[base + idx.sub_offsets[s]] = out[s];
        }
    }
}

ComplexMatrix embed_dense(const ComplexMatrix& op, const std::vector<std::string>& targets,
                          const RegisterLayout& layout) {
    std::vector<std::size_t> regs;
    regs.reserve(targets.size());
    for (const auto& name : targets) regs.push_back(layout.index_of(name));
    const SubsetIndexer idx = subset_indexer(layout, regs);
    if (!op.square() || op.rows() != idx.sub_dim)
        throw PreconditionError("embed_dense: operator dimension mismatch with targets");
    const std::size_t total = layout.total_dim();
    ensure_within_cap(total, "embed_dense");
    ComplexMatrix out(total, total);
#pragma omp parallel for schedule(static)
    for (long long o = 0; o < static_cast<long long>(idx.outer_dim); ++o) {
        const std::size_t base = idx.outer_offsets[static_cast<std::size_t>(o)];
        for (std::size_t r = 0; r < idx.sub_dim; ++r)
            for (std::size_t c = 0; c < idx.sub_dim; ++c)
                out(base + idx.sub_offsets[r], base + idx.sub_offsets[c]) = op(r, c);
    }
    return out;
}

ComplexMatrix partial_trace_dense(const ComplexMatrix& rho, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard) {
    if (!rho.square() || rho.rows() != layout.total_dim())
        throw PreconditionError("partial_trace: operator does not match layout");
    std::vector<std::size_t> traced;
    for (const auto& name : discard) traced.push_back(layout.index_of(name));
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < layout.size(); ++i)
        if (std::find(traced.begin(), traced.end(), i) == traced.end()) kept.push_back(i);

    const std::vector<std::size_t> kept_off = subset_indexer(layout, kept).sub_offsets;
    const std::vector<std::size_t> traced_off = subset_indexer(layout, traced).sub_offsets;
    const std::size_t K = kept_off.size();
    ComplexMatrix out(K, K);
#pragma omp parallel for schedule(static)
    for (long long k1 = 0; k1 < static_cast<long long>(K); ++k1) {
        for (std::size_t k2 = 0; k2 < K; ++k2) {
            cplx acc{0.0, 0.0};
            for (std::size_t t : traced_off)
                acc += rho(kept_off[static_cast<std::size_t>(k1)] + t, kept_off[k2] + t);
            out(static_cast<std::size_t>(k1), k2) = acc;
        }
    }
    return out;
}

ComplexMatrix partial_trace_outer(const CVec& u, const CVec& v, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard) {
    if (u.size() != layout.total_dim() || v.size() != layout.total_dim())
        throw PreconditionError("partial_trace_outer: vector length mismatch");
    std::vector<std::size_t> traced;
    for (const auto& name : discard) traced.push_back(layout.index_of(name));
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < layout.size(); ++i)
        if (std::find(traced.begin(), traced.end(), i) == traced.end()) kept.push_back(i);

    const std::vector<std::size_t> kept_off = subset_indexer(layout, kept).sub_offsets;
    const std::vector<std::size_t> traced_off = subset_indexer(layout, traced).sub_offsets;
    const std::size_t K = kept_off.size();
    const std::size_t T = traced_off.size();

    // Nonzero entries of v per traced index; protocol branch vectors are
    // supported on a few hundred basis states, so this keeps the cost at
    // one scan plus the true outer-product work.
    std::vector<std::vector<std::pair<std::size_t, cplx>>> v_nonzero(T);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 0; k < K; ++k) {
            const cplx val = v[kept_off[k] + traced_off[t]];
            if (val != cplx{0.0, 0.0}) v_nonzero[t].emplace_back(k, std::conj(val));
        }
    }
    ComplexMatrix out(K, K);
#pragma omp parallel for schedule(static)
    for (long long k1 = 0; k1 < static_cast<long long>(K); ++k1) {
        for (std::size_t t = 0; t < T; ++t) {
            const cplx uval = u[kept_off[static_cast<std::size_t>(k1)] + traced_off[t]];
            if (uval == cplx{0.0, 0.0}) continue;
            for (const auto& [k2, vconj] : v_nonzero[t])
                out(static_cast<std::size_t>(k1), k2) += uval * vconj;
        }
    }
    return out;
}

namespace reference {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw PreconditionError("matmul: inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
        }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

void apply_embedded(const ComplexMatrix& op, const std::vector<std::size_t>& target_regs,
                    const RegisterLayout& layout, CVec& v, bool adjoint) {
    const SubsetIndexer idx = subset_indexer(layout, target_regs);
    if (!op.square() || op.rows() != idx.sub_dim)
        throw PreconditionError("apply_embedded: operator dimension mismatch");
    const std::size_t d = idx.sub_dim;
    CVec in(d), out(d);
    for (std::size_t o = 0; o < idx.outer_dim; ++o) {
        const std::size_t base = idx.outer_offsets[o];
        for (std::size_t s = 0; s < d; ++s) in[s] = v[base + idx.sub_offsets[s]];
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc{0.0, 0.0};
            if (adjoint) {
                for (std::size_t c = 0; c < d; ++c) acc += std::conj(op(c, r)) * in[c];
            } else {
                for (std::size_t c = 0; c < d; ++c) acc += op(r, c) * in[c];
            }
            out[r] = acc;
        }
        for (std::size_t s = 0; s < d; ++s) v[base + idx.sub_offsets[s]] = out[s];
    }
}

ComplexMatrix partial_trace_dense(const ComplexMatrix& rho, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard) {
    std::vector<std::size_t> traced;
    for (const auto& name : discard) traced.push_back(layout.index_of(name));
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < layout.size(); ++i)
        if (std::find(traced.begin(), traced.end(), i) == traced.end()) kept.push_back(i);
    const std::vector<std::size_t> kept_off = subset_indexer(layout, kept).sub_offsets;
    const std::vector<std::size_t> traced_off = subset_indexer(layout, traced).sub_offsets;
    ComplexMatrix out(kept_off.size(), kept_off.size());
    for (std::size_t k1 = 0; k1 < kept_off.size(); ++k1)
        for (std::size_t k2 = 0; k2 < kept_off.size(); ++k2)
            for (std::size_t t : traced_off)
                out(k1, k2) += rho(kept_off[k1] + t, kept_off[k2] + t);
    return out;
}

ComplexMatrix partial_trace_outer(const CVec& u, const CVec& v, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard) {
    std::vector<std::size_t> traced;
    for (const auto& name : discard) traced.push_back(layout.index_of(name));
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < layout.size(); ++i)
        if (std::find(traced.begin(), traced.end(), i) == traced.end()) kept.push_back(i);
    const std::vector<std::size_t> kept_off = subset_indexer(layout, kept).sub_offsets;
    const std::vector<std::size_t> traced_off = subset_indexer(layout, traced).sub_offsets;
    ComplexMatrix out(kept_off.size(), kept_off.size());
    for (std::size_t k1 = 0; k1 < kept_off.size(); ++k1)
        for (std::size_t k2 = 0; k2 < kept_off.size(); ++k2)
            for (std::size_t t : traced_off)
                out(k1, k2) += u[kept_off[k1] + t] * std::conj(v[kept_off[k2] + t]);
    return out;
}

} // namespace reference

} // namespace qzk
