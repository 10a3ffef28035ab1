#pragma once

#include <string>
#include <vector>

#include "qzk/complex_matrix.hpp"
#include "qzk/register_layout.hpp"
#include "qzk/state.hpp"

namespace qzk {

// An admissible map held through its action on the d_in^2 matrix units,
// which determines it completely and keeps application linear by
// construction. unit_image(i, j) = Phi(|i><j|).
class ChannelHandle {
  public:
    ChannelHandle() = default;
    ChannelHandle(RegisterLayout in, RegisterLayout out, std::vector<ComplexMatrix> unit_images);

    const RegisterLayout& input_layout() const { return in_; }
    const RegisterLayout& output_layout() const { return out_; }
    std::size_t input_dim() const { return in_.total_dim(); }
    std::size_t output_dim() const { return out_.total_dim(); }

    const ComplexMatrix& unit_image(std::size_t i, std::size_t j) const;

    ComplexMatrix apply_matrix(const ComplexMatrix& x) const;
    DensityOperator apply(const DensityOperator& rho) const;

  private:
    RegisterLayout in_;
    RegisterLayout out_;
    std::vector<ComplexMatrix> units_; // row-major (i, j)
};

// J(Phi) = sum_ij Phi(|i><j|) (x) |i><j| — output factor first, input
// factor second. All modules share this convention.
struct ChoiMatrix {
    std::size_t d_in = 0;
    std::size_t d_out = 0;
    ComplexMatrix mat; // square, dimension d_in * d_out
};

ChoiMatrix choi_of(const ChannelHandle& channel);

// trace_norm(J_a - J_b); zero exactly when the maps are equal.
double choi_trace_distance(const ChoiMatrix& a, const ChoiMatrix& b);

// Optimal distinguishing advantage (1/2)||rho - xi||_1 of any measurement.
double state_trace_distance(const DensityOperator& rho, const DensityOperator& xi);

struct AdmissibleReport {
    bool cp_ok = false;
    bool tp_ok = false;
    double min_choi_eigenvalue = 0.0;
    double tp_residual = 0.0; // ||Tr_out J - I||_F
};

AdmissibleReport verify_admissible(const ChannelHandle& channel);

// Partial trace of the Choi matrix over the output factor; equals the
// identity on the input factor exactly when the channel is
// trace-preserving.
ComplexMatrix choi_input_marginal(const ChoiMatrix& choi);

// Composite map Phi_2 o Phi_1 as a single handle (dimensions must chain).
ChannelHandle compose_channels(const ChannelHandle& second, const ChannelHandle& first);

// Applies the channel to the first register of rho, identity on the rest.
// Output registers that collide with carried-over names get a prime
// appended.
DensityOperator apply_to_first_register(const ChannelHandle& channel, const DensityOperator& rho);

// Sequential protocol composition: run `first`, then run `second` on the
// auxiliary register (the first register of `first`'s output), carrying
// the earlier messages along untouched.
ChannelHandle compose_on_first_register(const ChannelHandle& second, const ChannelHandle& first);

// --- binary Choi file format --------------------------------------------
// magic "QCHOI1", then d_in and d_out as 64-bit little-endian integers,
// then row-major entries as little-endian (real, imag) float64 pairs.

void write_choi(const ChoiMatrix& choi, const std::string& path);
ChoiMatrix read_choi(const std::string& path);

} // namespace qzk
