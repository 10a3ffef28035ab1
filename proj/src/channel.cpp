#include "qzk/channel.hpp"

#include <cstring>
#include <fstream>

#include "qzk/config.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"

namespace qzk {

ChannelHandle::ChannelHandle(RegisterLayout in, RegisterLayout out,
                             std::vector<ComplexMatrix> unit_images)
    : in_(std::move(in)), out_(std::move(out)), units_(std::move(unit_images)) {
    const std::size_t d = in_.total_dim();
    if (units_.size() != d * d)
        throw PreconditionError("ChannelHandle: expected one image per matrix unit");
    for (const auto& u : units_)
        if (u.rows() != out_.total_dim() || u.cols() != out_.total_dim())
            throw PreconditionError("ChannelHandle: unit image does not match output layout");
}

const ComplexMatrix& ChannelHandle::unit_image(std::size_t i, std::size_t j) const {
    const std::size_t d = in_.total_dim();
    if (i >= d || j >= d) throw PreconditionError("ChannelHandle: unit index out of range");
    return units_[i * d + j];
}

ComplexMatrix ChannelHandle::apply_matrix(const ComplexMatrix& x) const {
    const std::size_t d = in_.total_dim();
    if (!x.square() || x.rows() != d)
        throw PreconditionError("ChannelHandle: input does not match input layout");
    ComplexMatrix out(out_.total_dim(), out_.total_dim());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const cplx w = x(i, j);
            if (w == cplx{0.0, 0.0}) continue;
            const ComplexMatrix& u = units_[i * d + j];
            for (std::size_t k = 0; k < u.entries().size(); ++k)
                out.entries()[k] += w * u.entries()[k];
        }
    return out;
}

DensityOperator ChannelHandle::apply(const DensityOperator& rho) const {
    if (rho.layout.total_dim() != in_.total_dim())
        throw PreconditionError("ChannelHandle: input layout mismatch");
    return DensityOperator(out_, apply_matrix(rho.mat));
}

ChoiMatrix choi_of(const ChannelHandle& channel) {
    const std::size_t d_in = channel.input_dim();
    const std::size_t d_out = channel.output_dim();
    ensure_within_cap(d_in * d_out, "choi_of");
    ChoiMatrix choi;
    choi.d_in = d_in;
    choi.d_out = d_out;
    choi.mat = ComplexMatrix(d_in * d_out, d_in * d_out);
    // Output factor first: row index (o1, i), column index (o2, j).
#pragma omp parallel for collapse(2) schedule(static)
    for (long long i = 0; i < static_cast<long long>(d_in); ++i)
        for (long long j = 0; j < static_cast<long long>(d_in); ++j) {
            const ComplexMatrix& u =
                channel.unit_image(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            for (std::size_t o1 = 0; o1 < d_out; ++o1)
                for (std::size_t o2 = 0; o2 < d_out; ++o2)
                    choi.mat(o1 * d_in + static_cast<std::size_t>(i),
                             o2 * d_in + static_cast<std::size_t>(j)) = u(o1, o2);
        }
    return choi;
}

double choi_trace_distance(const ChoiMatrix& a, const ChoiMatrix& b) {
    if (a.d_in != b.d_in || a.d_out != b.d_out)
        throw PreconditionError("choi_trace_distance: dimension mismatch");
    return trace_norm(a.mat - b.mat);
}

double state_trace_distance(const DensityOperator& rho, const DensityOperator& xi) {
    if (rho.layout.total_dim() != xi.layout.total_dim())
        throw PreconditionError("state_trace_distance: dimension mismatch");
    return 0.5 * trace_norm(rho.mat - xi.mat);
}

ComplexMatrix choi_input_marginal(const ChoiMatrix& choi) {
    ComplexMatrix out(choi.d_in, choi.d_in);
    for (std::size_t i = 0; i < choi.d_in; ++i)
        for (std::size_t j = 0; j < choi.d_in; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t o = 0; o < choi.d_out; ++o)
                acc += choi.mat(o * choi.d_in + i, o * choi.d_in + j);
            out(i, j) = acc;
        }
    return out;
}

AdmissibleReport verify_admissible(const ChannelHandle& channel) {
    const ChoiMatrix choi = choi_of(channel);
    AdmissibleReport report;
    const auto eigs = hermitian_eigenvalues(choi.mat);
    report.min_choi_eigenvalue = eigs.empty() ? 0.0 : eigs.front();
    report.tp_residual =
        (choi_input_marginal(choi) - ComplexMatrix::identity(choi.d_in)).frobenius_norm();
    const double tol = tolerances().equality;
    report.cp_ok = report.min_choi_eigenvalue >= -tol;
    report.tp_ok = report.tp_residual <= tol;
    return report;
}

ChannelHandle compose_channels(const ChannelHandle& second, const ChannelHandle& first) {
    if (first.output_dim() != second.input_dim())
        throw PreconditionError("compose_channels: dimensions do not chain");
    const std::size_t d = first.input_dim();
    std::vector<ComplexMatrix> units(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            units[i * d + j] = second.apply_matrix(first.unit_image(i, j));
    return ChannelHandle(first.input_layout(), second.output_layout(), std::move(units));
}

namespace {

RegisterLayout join_layouts(const RegisterLayout& head, const RegisterLayout& tail) {
    std::vector<RegisterLayout::Register> regs = head.registers();
    for (const auto& r : tail.registers()) {
        std::string name = r.name;
        auto used = [&](const std::string& n) {
            for (const auto& existing : regs)
                if (existing.name == n) return true;
            return false;
        };
        while (used(name)) name += "'";
        regs.push_back({name, r.dim});
    }
    return RegisterLayout(std::move(regs));
}

} // namespace

DensityOperator apply_to_first_register(const ChannelHandle& channel, const DensityOperator& rho) {
    const RegisterLayout& layout = rho.layout;
    if (layout.size() < 1 || layout.reg(0).dim != channel.input_dim())
        throw PreconditionError("apply_to_first_register: first register does not match channel input");
    const std::size_t d = channel.input_dim();
    const std::size_t rest = layout.total_dim() / d;
    const std::size_t d_out = channel.output_dim();
    ensure_within_cap(d_out * rest, "apply_to_first_register");

    std::vector<RegisterLayout::Register> rest_regs(layout.registers().begin() + 1,
                                                    layout.registers().end());
    const RegisterLayout out_layout =
        join_layouts(channel.output_layout(), RegisterLayout(rest_regs));

    ComplexMatrix out(d_out * rest, d_out * rest);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const ComplexMatrix& u = channel.unit_image(i, j);
            for (std::size_t o1 = 0; o1 < d_out; ++o1)
                for (std::size_t o2 = 0; o2 < d_out; ++o2) {
                    const cplx w = u(o1, o2);
                    if (w == cplx{0.0, 0.0}) continue;
                    for (std::size_t r1 = 0; r1 < rest; ++r1)
                        for (std::size_t r2 = 0; r2 < rest; ++r2)
                            out(o1 * rest + r1, o2 * rest + r2) +=
                                w * rho.mat(i * rest + r1, j * rest + r2);
                }
        }
    return DensityOperator(out_layout, std::move(out));
}

ChannelHandle compose_on_first_register(const ChannelHandle& second,
                                        const ChannelHandle& first) {
    const std::size_t d = first.input_dim();
    std::vector<ComplexMatrix> units(d * d);
    RegisterLayout out_layout;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            DensityOperator img = apply_to_first_register(
                second, DensityOperator(first.output_layout(), first.unit_image(i, j)));
            out_layout = img.layout;
            units[i * d + j] = std::move(img.mat);
        }
    return ChannelHandle(first.input_layout(), out_layout, std::move(units));
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(out, bits);
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

} // namespace

void write_choi(const ChoiMatrix& choi, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_choi: cannot open '" + path + "'");
    out.write("QCHOI1", 6);
    put_u64(out, choi.d_in);
    put_u64(out, choi.d_out);
    for (const cplx& v : choi.mat.entries()) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    if (!out) throw Error("write_choi: write failed for '" + path + "'");
}

ChoiMatrix read_choi(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_choi: cannot open '" + path + "'");
    char magic[6];
    in.read(magic, 6);
    if (!in || std::string(magic, 6) != "QCHOI1")
        throw Error("read_choi: bad magic in '" + path + "'");
    ChoiMatrix choi;
    choi.d_in = get_u64(in);
    choi.d_out = get_u64(in);
    const std::size_t dim = choi.d_in * choi.d_out;
    ensure_within_cap(dim, "read_choi");
    choi.mat = ComplexMatrix(dim, dim);
    for (cplx& v : choi.mat.entries()) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        v = cplx{re, im};
    }
    if (!in) throw Error("read_choi: truncated file '" + path + "'");
    return choi;
}

} // namespace qzk
