#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "qzk/channel.hpp"
#include "qzk/error.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"
#include "qzk/state.hpp"

using namespace qzk;

namespace {

RegisterLayout wire(std::size_t d, const std::string& name = "W") {
    return RegisterLayout({{name, d}});
}

ChannelHandle unitary_channel(const ComplexMatrix& u) {
    const std::size_t d = u.rows();
    std::vector<ComplexMatrix> units(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ComplexMatrix unit(d, d);
            unit(i, j) = 1.0;
            units[i * d + j] = matmul(matmul(u, unit), u.adjoint());
        }
    return ChannelHandle(wire(d), wire(d), std::move(units));
}

ChannelHandle identity_channel(std::size_t d) { return unitary_channel(ComplexMatrix::identity(d)); }

ChannelHandle depolarizing_channel(std::size_t d) {
    std::vector<ComplexMatrix> units(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ComplexMatrix out(d, d);
            if (i == j)
                for (std::size_t k = 0; k < d; ++k) out(k, k) = 1.0 / static_cast<double>(d);
            units[i * d + j] = std::move(out);
        }
    return ChannelHandle(wire(d), wire(d), std::move(units));
}

ChannelHandle transpose_map(std::size_t d) {
    std::vector<ComplexMatrix> units(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ComplexMatrix unit(d, d);
            unit(j, i) = 1.0;
            units[i * d + j] = std::move(unit);
        }
    return ChannelHandle(wire(d), wire(d), std::move(units));
}

} // namespace

TEST_CASE("choi matrices of reference channels") {
    SUBCASE("identity channel") {
        const ChoiMatrix j = choi_of(identity_channel(2));
        CHECK(j.mat.trace().real() == doctest::Approx(2.0).epsilon(1e-14));
        // J = sum_ij |i><j| (x) |i><j|
        for (std::size_t o1 = 0; o1 < 2; ++o1)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t o2 = 0; o2 < 2; ++o2)
                    for (std::size_t jj = 0; jj < 2; ++jj) {
                        const cplx expected = (o1 == i && o2 == jj) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
                        CHECK(std::abs(j.mat(o1 * 2 + i, o2 * 2 + jj) - expected) < 1e-14);
                    }
    }

    SUBCASE("completely depolarizing channel") {
        const ChoiMatrix j = choi_of(depolarizing_channel(2));
        const ComplexMatrix expected =
            kron(0.5 * ComplexMatrix::identity(2), ComplexMatrix::identity(2));
        CHECK(max_abs_diff(j.mat, expected) < 1e-14);
        CHECK(j.mat.trace().real() == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("unitary conjugation has a rank-1 Choi matrix with eigenvalue d") {
        const ChannelHandle ch = unitary_channel(random_unitary(3, 7));
        const auto eigs = hermitian_eigenvalues(choi_of(ch).mat);
        CHECK(eigs.back() == doctest::Approx(3.0).epsilon(1e-12));
        for (std::size_t i = 0; i + 1 < eigs.size(); ++i) CHECK(std::abs(eigs[i]) < 1e-10);
    }
}

TEST_CASE("choi trace distance") {
    const ChoiMatrix j_id = choi_of(identity_channel(2));
    CHECK(choi_trace_distance(j_id, j_id) == 0.0);

    const ComplexMatrix x_flip = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const ChoiMatrix j_x = choi_of(unitary_channel(x_flip));
    CHECK(choi_trace_distance(j_id, j_x) == doctest::Approx(4.0).epsilon(1e-12));

    ChoiMatrix wrong = j_id;
    wrong.d_in = 3;
    CHECK_THROWS_AS(choi_trace_distance(j_id, wrong), PreconditionError);
}

TEST_CASE("choi trace distance is a metric on a channel triple") {
    const ChoiMatrix a = choi_of(identity_channel(2));
    const ChoiMatrix b = choi_of(unitary_channel(random_unitary(2, 31)));
    const ChoiMatrix c = choi_of(depolarizing_channel(2));
    const double ab = choi_trace_distance(a, b);
    const double ba = choi_trace_distance(b, a);
    const double bc = choi_trace_distance(b, c);
    const double ac = choi_trace_distance(a, c);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
    CHECK(ac <= ab + bc + 1e-9);
}

TEST_CASE("state trace distance") {
    RegisterLayout layout({{"W", 2}});
    const DensityOperator zero = pure_density(basis_state(layout, 0));
    const DensityOperator one = pure_density(basis_state(layout, 1));
    const DensityOperator mixed = maximally_mixed(layout);

    CHECK(state_trace_distance(zero, zero) == 0.0);
    CHECK(state_trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(state_trace_distance(zero, mixed) == doctest::Approx(0.5).epsilon(1e-14));

    const DensityOperator bigger = maximally_mixed(RegisterLayout({{"W", 3}}));
    CHECK_THROWS_AS(state_trace_distance(zero, bigger), PreconditionError);
}

TEST_CASE("verify_admissible") {
    const AdmissibleReport ok = verify_admissible(identity_channel(2));
    CHECK(ok.cp_ok);
    CHECK(ok.tp_ok);

    const AdmissibleReport bad = verify_admissible(transpose_map(2));
    CHECK_FALSE(bad.cp_ok);
    CHECK(bad.tp_ok); // transpose preserves trace
    CHECK(bad.min_choi_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("channel application is linear and matches composition") {
    const ChannelHandle f = unitary_channel(random_unitary(2, 41));
    const ChannelHandle g = depolarizing_channel(2);
    const ChannelHandle fg = compose_channels(g, f);

    // Composition agrees with sequential application on a basis of inputs.
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            ComplexMatrix unit(2, 2);
            unit(i, j) = 1.0;
            const ComplexMatrix lhs = fg.apply_matrix(unit);
            const ComplexMatrix rhs = g.apply_matrix(f.apply_matrix(unit));
            CHECK(max_abs_diff(lhs, rhs) < 1e-12);
        }

    // Linearity spot check on a random combination.
    const ComplexMatrix m1 = 0.25 * ComplexMatrix::identity(2);
    ComplexMatrix m2(2, 2);
    m2(0, 1) = cplx{0.3, -0.2};
    m2(1, 0) = cplx{0.3, 0.2};
    const ComplexMatrix lhs = f.apply_matrix(m1 + m2);
    const ComplexMatrix rhs = f.apply_matrix(m1) + f.apply_matrix(m2);
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("equal channels stay equal on half an entangled state") {
    const ComplexMatrix u = random_unitary(2, 55);
    const ChannelHandle a = unitary_channel(u);
    // Same map assembled through different arithmetic: conjugate by u twice
    // with an intermediate identity factor.
    const ChannelHandle b = compose_channels(identity_channel(2), unitary_channel(u));

    RegisterLayout pair_layout({{"W", 2}, {"E", 2}});
    ComplexMatrix omega(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) omega(i * 2 + i, j * 2 + j) = 0.5;
    const DensityOperator ent(pair_layout, omega);
    const double dist = state_trace_distance(apply_to_first_register(a, ent),
                                             apply_to_first_register(b, ent));
    CHECK(dist <= 1e-9);
}

TEST_CASE("choi binary file round-trip") {
    const ChoiMatrix j = choi_of(unitary_channel(random_unitary(2, 77)));
    const std::string path = "choi_roundtrip.bin";
    write_choi(j, path);
    const ChoiMatrix back = read_choi(path);
    CHECK(back.d_in == j.d_in);
    CHECK(back.d_out == j.d_out);
    CHECK(back.mat.entries() == j.mat.entries()); // bit-exact
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_choi("does_not_exist.bin"), Error);
}

TEST_CASE("handle construction errors") {
    std::vector<ComplexMatrix> units(4, ComplexMatrix(3, 3));
    CHECK_THROWS_AS(ChannelHandle(wire(2), wire(2), units), PreconditionError);
    std::vector<ComplexMatrix> too_few(2, ComplexMatrix(2, 2));
    CHECK_THROWS_AS(ChannelHandle(wire(2), wire(2), too_few), PreconditionError);
}
