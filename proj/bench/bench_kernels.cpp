// Benchmark comparing the OpenMP kernels against the serial reference
// implementations. Deviations must be exactly zero: every output element
// is accumulated in the same order on both paths.

#include <chrono>
#include <cstdio>
#include <vector>

#include "qzk/complex_matrix.hpp"
#include "qzk/kernels.hpp"
#include "qzk/linalg.hpp"
#include "qzk/register_layout.hpp"

using namespace qzk;

namespace {

double ms_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix m(rows, cols);
    for (auto& v : m.entries()) v = cplx{rng.gaussian(), rng.gaussian()};
    return m;
}

void report(const char* name, double par_ms, double ser_ms, double deviation) {
    std::printf("%-22s  parallel %9.2f ms   serial %9.2f ms   speedup %5.2fx   max|diff| %g\n",
                name, par_ms, ser_ms, ser_ms / par_ms, deviation);
}

} // namespace

int main() {
    std::printf("kernel benchmark (parallel vs serial reference)\n\n");

    {
        const std::size_t n = 384;
        const ComplexMatrix a = random_matrix(n, n, 1);
        const ComplexMatrix b = random_matrix(n, n, 2);
        auto t0 = std::chrono::steady_clock::now();
        const ComplexMatrix p = matmul(a, b);
        const double par = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const ComplexMatrix s = reference::matmul(a, b);
        report("matmul 384x384", par, ms_since(t0), max_abs_diff(p, s));
    }
    {
        const ComplexMatrix a = random_matrix(48, 48, 3);
        const ComplexMatrix b = random_matrix(48, 48, 4);
        auto t0 = std::chrono::steady_clock::now();
        const ComplexMatrix p = kron(a, b);
        const double par = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const ComplexMatrix s = reference::kron(a, b);
        report("kron 48x48 (x) 48x48", par, ms_since(t0), max_abs_diff(p, s));
    }
    {
        const RegisterLayout layout({{"W", 4}, {"V", 4}, {"A", 4}, {"Y", 4}, {"Z", 4}, {"R", 64}});
        const ComplexMatrix op = random_unitary(16, 5);
        CVec v = random_unit_vector(layout.total_dim(), 6);
        CVec w = v;
        auto t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 50; ++rep) apply_embedded(op, {0, 2}, layout, v);
        const double par = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 50; ++rep) reference::apply_embedded(op, {0, 2}, layout, w);
        double dev = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dev = std::max(dev, std::abs(v[i] - w[i]));
        report("apply_embedded x50", par, ms_since(t0), dev);
    }
    {
        const RegisterLayout layout({{"A", 16}, {"B", 16}, {"C", 16}});
        const ComplexMatrix rho = random_matrix(layout.total_dim(), layout.total_dim(), 7);
        auto t0 = std::chrono::steady_clock::now();
        const ComplexMatrix p = partial_trace_dense(rho, layout, {"B"});
        const double par = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const ComplexMatrix s = reference::partial_trace_dense(rho, layout, {"B"});
        report("partial_trace 4096", par, ms_since(t0), max_abs_diff(p, s));
    }
    {
        const RegisterLayout layout({{"W", 8}, {"Y", 32}, {"B", 8}, {"R", 32}});
        const CVec u = random_unit_vector(layout.total_dim(), 8);
        const CVec v = random_unit_vector(layout.total_dim(), 9);
        auto t0 = std::chrono::steady_clock::now();
        const ComplexMatrix p = partial_trace_outer(u, v, layout, {"B", "R"});
        const double par = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const ComplexMatrix s = reference::partial_trace_outer(u, v, layout, {"B", "R"});
        report("partial_trace_outer", par, ms_since(t0), max_abs_diff(p, s));
    }
    return 0;
}
