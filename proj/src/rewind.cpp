#include "qzk/rewind.hpp"

#include <cmath>

#include "qzk/config.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"

namespace qzk {

namespace {

constexpr double kEigenvalueWindow = 1e-6;

void axpy(CVec& y, cplx a, const CVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double distance(const CVec& a, const CVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

} // namespace

SimulatorAssembly::SimulatorAssembly(RegisterLayout layout,
                                     std::vector<ComplexMatrix> verifier_blocks, CVec prep_target)
    : layout_(std::move(layout)), blocks_(std::move(verifier_blocks)),
      prep_(std::move(prep_target)), traced_{"B", "R"} {
    static const char* expected[] = {"W", "V", "A", "Y", "B", "Z", "R"};
    if (layout_.size() != 7) throw PreconditionError("assembly layout must have registers W,V,A,Y,B,Z,R");
    for (std::size_t i = 0; i < 7; ++i)
        if (layout_.reg(i).name != expected[i])
            throw PreconditionError("assembly layout register order must be W,V,A,Y,B,Z,R");
    if (layout_.dim_of("A") != layout_.dim_of("B"))
        throw PreconditionError("assembly: agreement test needs dim(A) == dim(B)");
    if (blocks_.size() != layout_.dim_of("Y"))
        throw PreconditionError("assembly: one verifier block per Y basis state required");
    const std::size_t wva = layout_.dim_of("W") * layout_.dim_of("V") * layout_.dim_of("A");
    for (const auto& b : blocks_)
        if (!b.square() || b.rows() != wva)
            throw PreconditionError("assembly: verifier block dimension mismatch");
    std::size_t prep_dim = 1;
    for (const char* name : {"Y", "B", "Z", "R"}) prep_dim *= layout_.dim_of(name);
    if (prep_.dim() != prep_dim)
        throw PreconditionError("assembly: preparation target dimension mismatch");

    verifier_regs_ = {0, 1, 2};
    prep_regs_ = {3, 4, 5, 6};
    stride_w_ = layout_.stride(0);
    a_stride_ = layout_.stride(2);
    b_stride_ = layout_.stride(4);
    ab_dim_ = layout_.dim_of("A");
}

void SimulatorAssembly::apply_prep(CVec& v, bool adjoint) const {
    qzk::apply_prep(prep_, prep_regs_, layout_, v, adjoint);
}

void SimulatorAssembly::apply_verifier(CVec& v, bool adjoint) const {
    apply_controlled(blocks_, verifier_regs_, y_reg_, layout_, v, adjoint);
}

void SimulatorAssembly::apply_u(CVec& v, bool adjoint) const {
    if (adjoint) {
        apply_verifier(v, true);
        apply_prep(v, true);
    } else {
        apply_prep(v);
        apply_verifier(v);
    }
}

void SimulatorAssembly::project_agree(CVec& v, int outcome) const {
    if (outcome != 0 && outcome != 1) throw PreconditionError("project_agree: outcome must be 0 or 1");
    const bool keep_equal = (outcome == 0);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(v.size()); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const std::size_t a = (idx / a_stride_) % ab_dim_;
        const std::size_t b = (idx / b_stride_) % ab_dim_;
        if ((a == b) != keep_equal) v[idx] = cplx{0.0, 0.0};
    }
}

void SimulatorAssembly::project_ancilla(CVec& v, int outcome) const {
    if (outcome != 0 && outcome != 1) throw PreconditionError("project_ancilla: outcome must be 0 or 1");
    const bool keep_zero = (outcome == 0);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(v.size()); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        if (((idx % stride_w_) == 0) != keep_zero) v[idx] = cplx{0.0, 0.0};
    }
}

void SimulatorAssembly::reflect_ancilla(CVec& v) const {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(v.size()); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        if ((idx % stride_w_) != 0) v[idx] = -v[idx];
    }
}

CVec SimulatorAssembly::initial_vector(const CVec& psi_w) const {
    if (psi_w.size() != dim_w()) throw PreconditionError("initial_vector: auxiliary state dimension mismatch");
    CVec v(full_dim(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < psi_w.size(); ++i) v[i * stride_w_] = psi_w[i];
    return v;
}

CVec SimulatorAssembly::basis_initial(std::size_t i) const {
    CVec psi(dim_w(), cplx{0.0, 0.0});
    psi[i] = 1.0;
    return initial_vector(psi);
}

RegisterLayout SimulatorAssembly::output_layout() const {
    return layout_.without(traced_);
}

AssemblyReport check_assembly(const SimulatorAssembly& assembly, std::uint64_t probe_seed) {
    AssemblyReport report;
    const std::size_t d = assembly.full_dim();

    const CVec probe = random_unit_vector(d, probe_seed);
    CVec w = probe;
    assembly.apply_prep(w);
    const double prep_norm_drift = std::abs(std::sqrt(norm_sq(w)) - 1.0);
    assembly.apply_prep(w, true);
    report.prep_unitarity = std::max(prep_norm_drift, distance(w, probe));

    w = probe;
    assembly.apply_verifier(w);
    const double ver_norm_drift = std::abs(std::sqrt(norm_sq(w)) - 1.0);
    assembly.apply_verifier(w, true);
    report.verifier_unitarity = std::max(ver_norm_drift, distance(w, probe));

    CVec e0(assembly.prep().dim(), cplx{0.0, 0.0});
    e0[0] = 1.0;
    assembly.prep().apply(e0);
    report.prep_target_residual = distance(e0, assembly.prep().target());

    const double tol = tolerances().structural;
    report.ok = report.prep_unitarity <= tol && report.verifier_unitarity <= tol &&
                report.prep_target_residual <= tol;
    return report;
}

ComplexMatrix compress_success_operator(const SimulatorAssembly& assembly) {
    const std::size_t dw = assembly.dim_w();
    std::vector<CVec> cols(dw);
    for (std::size_t j = 0; j < dw; ++j) {
        cols[j] = assembly.basis_initial(j);
        assembly.apply_u(cols[j]);
        assembly.project_agree(cols[j], 0);
    }
    ComplexMatrix q(dw, dw);
    for (std::size_t i = 0; i < dw; ++i)
        for (std::size_t j = 0; j < dw; ++j) q(i, j) = dot(cols[i], cols[j]);
    return q;
}

double RotationResiduals::max_identity_residual() const {
    double m = ortho_inputs;
    m = std::max(m, ortho_outputs);
    m = std::max(m, forward0);
    m = std::max(m, forward1);
    m = std::max(m, adjoint0);
    return std::max(m, adjoint1);
}

RotationOps dense_rotation_ops(ComplexMatrix u, ComplexMatrix pi0, ComplexMatrix delta0) {
    if (!u.square() || !pi0.square() || !delta0.square() || u.rows() != pi0.rows() ||
        u.rows() != delta0.rows())
        throw PreconditionError("dense_rotation_ops: dimension mismatch");
    const std::size_t d = u.rows();
    auto apply_dense = [d](const ComplexMatrix& m, CVec& v, bool adjoint) {
        CVec out(d, cplx{0.0, 0.0});
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t c = 0; c < d; ++c)
                acc += (adjoint ? std::conj(m(c, r)) : m(r, c)) * v[c];
            out[r] = acc;
        }
        v = std::move(out);
    };
    auto complement = [d, apply_dense](const ComplexMatrix& p, CVec& v) {
        CVec pv = v;
        apply_dense(p, pv, false);
        for (std::size_t i = 0; i < d; ++i) v[i] -= pv[i];
    };
    RotationOps ops;
    ops.u = [=](CVec& v) { apply_dense(u, v, false); };
    ops.u_adj = [=](CVec& v) { apply_dense(u, v, true); };
    ops.pi0 = [=](CVec& v) { apply_dense(pi0, v, false); };
    ops.pi1 = [=](CVec& v) { complement(pi0, v); };
    ops.delta0 = [=](CVec& v) { apply_dense(delta0, v, false); };
    ops.delta1 = [=](CVec& v) { complement(delta0, v); };
    return ops;
}

RotationOps assembly_rotation_ops(const SimulatorAssembly& assembly) {
    const SimulatorAssembly* a = &assembly;
    RotationOps ops;
    ops.u = [a](CVec& v) { a->apply_u(v); };
    ops.u_adj = [a](CVec& v) { a->apply_u(v, true); };
    ops.pi0 = [a](CVec& v) { a->project_agree(v, 0); };
    ops.pi1 = [a](CVec& v) { a->project_agree(v, 1); };
    ops.delta0 = [a](CVec& v) { a->project_ancilla(v, 0); };
    ops.delta1 = [a](CVec& v) { a->project_ancilla(v, 1); };
    return ops;
}

RewindRotation decompose_rotation(const RotationOps& ops, const CVec& seed) {
    RewindRotation rot;
    rot.input_main = seed;

    CVec u_seed = seed;
    ops.u(u_seed);
    CVec succ = u_seed;
    ops.pi0(succ);
    const double lambda = norm_sq(succ);
    rot.lambda = lambda;
    if (lambda < kEigenvalueWindow || lambda > 1.0 - kEigenvalueWindow)
        throw PreconditionError("decompose_rotation: eigenvalue outside the (0,1) window");

    // Eigenvector residual of Delta0 U* Pi0 U Delta0 at the seed.
    {
        CVec t = seed;
        ops.delta0(t);
        ops.u(t);
        ops.pi0(t);
        ops.u_adj(t);
        ops.delta0(t);
        axpy(t, cplx{-lambda, 0.0}, seed);
        rot.residuals.eigenvector = std::sqrt(norm_sq(t));
        if (rot.residuals.eigenvector > tolerances().eigensolver)
            throw PreconditionError("decompose_rotation: seed is not an eigenvector within tolerance");
    }

    const double sl = std::sqrt(lambda);
    const double cl = std::sqrt(1.0 - lambda);

    rot.success = succ;
    for (cplx& x : rot.success) x /= sl;

    rot.failure = u_seed;
    ops.pi1(rot.failure);
    for (cplx& x : rot.failure) x /= cl;

    rot.input_ortho = rot.success;
    ops.u_adj(rot.input_ortho);
    ops.delta1(rot.input_ortho);
    for (cplx& x : rot.input_ortho) x /= cl;

    rot.residuals.ortho_inputs = std::abs(dot(rot.input_main, rot.input_ortho));
    rot.residuals.ortho_outputs = std::abs(dot(rot.success, rot.failure));

    {
        CVec lhs = u_seed; // U inputs already computed
        CVec rhs(lhs.size(), cplx{0.0, 0.0});
        axpy(rhs, cplx{sl, 0.0}, rot.success);
        axpy(rhs, cplx{cl, 0.0}, rot.failure);
        rot.residuals.forward0 = distance(lhs, rhs);
    }
    {
        CVec lhs = rot.input_ortho;
        ops.u(lhs);
        CVec rhs(lhs.size(), cplx{0.0, 0.0});
        axpy(rhs, cplx{cl, 0.0}, rot.success);
        axpy(rhs, cplx{-sl, 0.0}, rot.failure);
        rot.residuals.forward1 = distance(lhs, rhs);
    }
    {
        CVec lhs = rot.success;
        ops.u_adj(lhs);
        CVec rhs(lhs.size(), cplx{0.0, 0.0});
        axpy(rhs, cplx{sl, 0.0}, rot.input_main);
        axpy(rhs, cplx{cl, 0.0}, rot.input_ortho);
        rot.residuals.adjoint0 = distance(lhs, rhs);
    }
    {
        CVec lhs = rot.failure;
        ops.u_adj(lhs);
        CVec rhs(lhs.size(), cplx{0.0, 0.0});
        axpy(rhs, cplx{cl, 0.0}, rot.input_main);
        axpy(rhs, cplx{-sl, 0.0}, rot.input_ortho);
        rot.residuals.adjoint1 = distance(lhs, rhs);
    }
    return rot;
}

SimulatorAssembly assemble_gi(const GIInstance& inst, const VerifierFamily& family) {
    if (!inst.isomorphic)
        throw PreconditionError("assemble_gi: the simulator analysis requires an isomorphic instance");
    const int n = inst.g0.vertex_count();
    const auto perms = enumerate_group(n);
    const std::size_t fact = perms.size();

    const RegisterLayout layout({{"W", family.dim_w},
                                 {"V", family.dim_v},
                                 {"A", 2},
                                 {"Y", family.y_basis.size()},
                                 {"B", 2},
                                 {"Z", fact},
                                 {"R", 2 * fact}});

    // Target of T: equal superposition over the sent graph, the guessed
    // bit, the reply permutation, and the purifying record (pi, b).
    const std::size_t d_y = family.y_basis.size();
    const std::size_t d_r = 2 * fact;
    CVec target(d_y * 2 * fact * d_r, cplx{0.0, 0.0});
    const double amp = 1.0 / std::sqrt(static_cast<double>(2 * fact));
    for (int b = 0; b < 2; ++b) {
        const Graph& g_b = (b == 0) ? inst.g0 : inst.g1;
        for (std::size_t p = 0; p < fact; ++p) {
            const std::size_t y = family.index_of(apply_permutation(perms[p], g_b));
            const std::size_t z = p;
            const std::size_t r = static_cast<std::size_t>(b) * fact + p;
            const std::size_t sub = ((y * 2 + static_cast<std::size_t>(b)) * fact + z) * d_r + r;
            target[sub] = amp;
        }
    }
    return SimulatorAssembly(layout, family.unitaries, std::move(target));
}

ChannelHandle simulate_single_shot(const SimulatorAssembly& assembly) {
    const std::size_t dw = assembly.dim_w();
    const RegisterLayout out_layout = assembly.output_layout();
    const RegisterLayout in_layout({{"W", dw}});

    std::vector<CVec> accept_cols(dw), recover_cols(dw);
    for (std::size_t j = 0; j < dw; ++j) {
        CVec v = assembly.basis_initial(j);
        assembly.apply_u(v);
        CVec s = v;
        assembly.project_agree(s, 0);
        accept_cols[j] = std::move(s);

        assembly.project_agree(v, 1);
        assembly.apply_u(v, true);
        assembly.reflect_ancilla(v);
        assembly.apply_u(v);
        recover_cols[j] = std::move(v);
    }

    std::vector<ComplexMatrix> units(dw * dw);
    for (std::size_t i = 0; i < dw; ++i)
        for (std::size_t j = 0; j < dw; ++j) {
            ComplexMatrix unit = partial_trace_outer(accept_cols[i], accept_cols[j],
                                                     assembly.layout(), assembly.traced_names());
            unit += partial_trace_outer(recover_cols[i], recover_cols[j], assembly.layout(),
                                        assembly.traced_names());
            units[i * dw + j] = std::move(unit);
        }
    return ChannelHandle(in_layout, out_layout, std::move(units));
}

IteratedRun simulate_iterated(const SimulatorAssembly& assembly, int iterations,
                              bool build_channel) {
    if (iterations < 1) throw PreconditionError("simulate_iterated: iteration count must be >= 1");
    IteratedRun run;
    run.q_spectrum = hermitian_eigenvalues(compress_success_operator(assembly));
    for (double lambda : run.q_spectrum)
        if (lambda < kEigenvalueWindow || lambda > 1.0 - kEigenvalueWindow)
            throw PreconditionError("simulate_iterated: success spectrum is degenerate");

    const std::size_t dw = assembly.dim_w();
    const RegisterLayout out_layout = assembly.output_layout();
    const std::size_t d_out = out_layout.total_dim();

    std::vector<CVec> pending(dw);
    for (std::size_t j = 0; j < dw; ++j) pending[j] = assembly.basis_initial(j);

    std::vector<ComplexMatrix> units;
    if (build_channel) units.assign(dw * dw, ComplexMatrix(d_out, d_out));

    double reach_mass = 1.0; // probability of arriving at the current iteration
    double total_success = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<CVec> accepted(dw);
        double branch_mass = 0.0;
        for (std::size_t j = 0; j < dw; ++j) {
            assembly.apply_u(pending[j]);
            accepted[j] = pending[j];
            assembly.project_agree(accepted[j], 0);
            branch_mass += norm_sq(accepted[j]);

            assembly.project_agree(pending[j], 1);
            assembly.apply_u(pending[j], true);
            assembly.reflect_ancilla(pending[j]);
        }
        branch_mass /= static_cast<double>(dw);
        run.success_probs.push_back(reach_mass > 0.0 ? branch_mass / reach_mass : 0.0);
        total_success += branch_mass;
        reach_mass -= branch_mass;

        if (build_channel) {
            for (std::size_t i = 0; i < dw; ++i)
                for (std::size_t j = 0; j < dw; ++j)
                    units[i * dw + j] += partial_trace_outer(accepted[i], accepted[j],
                                                             assembly.layout(),
                                                             assembly.traced_names());
        }
    }
    run.residual_failure = 1.0 - total_success;

    if (build_channel) {
        // Renormalize by the total success probability; for a one-point
        // spectrum this makes the channel exactly the single-iteration
        // interaction map.
        const cplx scale{1.0 / total_success, 0.0};
        for (ComplexMatrix& u : units) u *= scale;
        run.conditional_channel =
            ChannelHandle(RegisterLayout({{"W", dw}}), out_layout, std::move(units));
    }
    return run;
}

int default_iteration_count(double lambda, double target_residual) {
    if (lambda <= 0.0 || lambda >= 1.0)
        throw PreconditionError("default_iteration_count: lambda must lie in (0,1)");
    const double retry = 1.0 - 4.0 * lambda * (1.0 - lambda);
    double residual = 1.0 - lambda;
    int k = 1;
    while (residual > target_residual && k < 10000) {
        residual *= retry;
        ++k;
    }
    return k;
}

} // namespace qzk
