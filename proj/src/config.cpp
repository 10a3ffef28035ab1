#include "qzk/config.hpp"

#include <cstdlib>
#include <string>

#include "qzk/error.hpp"

namespace qzk {

namespace {

std::size_t initial_cap() {
    // Default 2^23: large enough for every shipped experiment, small
    // enough that a runaway tensor product fails fast.
    std::size_t cap = std::size_t{1} << 23;
    if (const char* env = std::getenv("QZK_DIM_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) cap = static_cast<std::size_t>(v);
    }
    return cap;
}

std::size_t g_cap = initial_cap();

} // namespace

Tolerances& tolerances() {
    static Tolerances tol;
    return tol;
}

std::size_t dimension_cap() { return g_cap; }

void set_dimension_cap(std::size_t cap) { g_cap = cap; }

void ensure_within_cap(std::size_t dim, const char* what) {
    if (dim > g_cap) {
        throw DimensionLimitError(std::string(what) + ": dimension " +
                                  std::to_string(dim) + " exceeds cap " +
                                  std::to_string(g_cap));
    }
}

} // namespace qzk
