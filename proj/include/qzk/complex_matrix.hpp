#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qzk {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Dense complex matrix, row-major. All protocol operators (verifier
// unitaries, message operators, projectors, Choi matrices) live here.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    CVec& entries() { return data_; }
    const CVec& entries() const { return data_; }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scalar);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVec data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx scalar, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, cplx scalar);

// Largest entrywise deviation; dimensions must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Deviation from the Hermitian part, as max |m - m*| entrywise.
double hermiticity_defect(const ComplexMatrix& m);

// Throws ContractError when any entry is NaN or infinite.
void ensure_finite(const ComplexMatrix& m, const char* what);

} // namespace qzk
