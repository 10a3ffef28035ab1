#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qzk/complex_matrix.hpp"
#include "qzk/register_layout.hpp"

// Dense linear-algebra kernels. The hot loops are OpenMP-parallel with a
// fixed per-element summation order, so results are bit-identical across
// thread counts. Serial reference implementations live in
// qzk::reference and are compared against the parallel kernels in the
// test suite and the benchmark target.

namespace qzk {

// Offset tables for addressing a register subset inside a layout.
// sub_offsets[s] is the flat-index contribution of the subset multi-index
// s (ordered as given in `targets`, first name most significant);
// outer_offsets[o] enumerates the remaining registers in layout order.
// Every flat index decomposes uniquely as outer_offsets[o] + sub_offsets[s].
struct SubsetIndexer {
    std::vector<std::size_t> sub_offsets;
    std::vector<std::size_t> outer_offsets;
    std::size_t sub_dim = 1;
    std::size_t outer_dim = 1;
};

SubsetIndexer subset_indexer(const RegisterLayout& layout,
                             const std::vector<std::size_t>& target_regs);

// conj(u) . v with a fixed chunked reduction order.
cplx dot(const CVec& u, const CVec& v);
double norm_sq(const CVec& v);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker product; dimension products are checked against the cap.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Applies `op` (dim = product of target dims) to the target registers of
// a full-layout vector, identity elsewhere. Targets may be non-adjacent
// and in any order. adjoint=true applies op^*.
void apply_embedded(const ComplexMatrix& op, const std::vector<std::size_t>& target_regs,
                    const RegisterLayout& layout, CVec& v, bool adjoint = false);

// Applies blocks[c] to the target registers when the control register
// holds value c (i.e. the operator sum_c blocks[c] (x) |c><c|).
void apply_controlled(const std::vector<ComplexMatrix>& blocks,
                      const std::vector<std::size_t>& target_regs, std::size_t control_reg,
                      const RegisterLayout& layout, CVec& v, bool adjoint = false);

// Dense embedding of `op` on the named target registers into the full
// layout dimension (identity on the rest).
ComplexMatrix embed_dense(const ComplexMatrix& op, const std::vector<std::string>& targets,
                          const RegisterLayout& layout);

// Reduced matrix after tracing out the named registers of a square
// operator on the layout.
ComplexMatrix partial_trace_dense(const ComplexMatrix& rho, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard);

// tr_discard(|u><v|) without forming the full outer product. Exact zeros
// in u and v are skipped, which makes protocol branch vectors cheap.
ComplexMatrix partial_trace_outer(const CVec& u, const CVec& v, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard);

namespace reference {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
void apply_embedded(const ComplexMatrix& op, const std::vector<std::size_t>& target_regs,
                    const RegisterLayout& layout, CVec& v, bool adjoint = false);
ComplexMatrix partial_trace_dense(const ComplexMatrix& rho, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard);
ComplexMatrix partial_trace_outer(const CVec& u, const CVec& v, const RegisterLayout& layout,
                                  const std::vector<std::string>& discard);

} // namespace reference

} // namespace qzk
