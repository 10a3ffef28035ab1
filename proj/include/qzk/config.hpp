#pragma once

#include <cstddef>
#include <cstdint>

namespace qzk {

// Numerical tolerances shared across the library. Structural checks
// (unitarity, projector idempotence, normalization) are tighter than
// equality assertions between independently computed objects; the
// eigensolver reconstruction bound is the loosest.
struct Tolerances {
    double structural = 1e-10;
    double equality = 1e-9;
    double eigensolver = 1e-8;
};

// Mutable process-wide defaults; experiments may override per run.
Tolerances& tolerances();

// Hard cap on the total dimension of any register layout or operator,
// guarding dense allocations. Overridable via the QZK_DIM_CAP environment
// variable (read once) or set_dimension_cap().
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

// Throws DimensionLimitError if dim exceeds the cap.
void ensure_within_cap(std::size_t dim, const char* what);

} // namespace qzk
