#pragma once

#include "abctk/zz.hpp"

#include <vector>

namespace abctk {

// Dense exact integer matrix, row-major.
struct IntMatrix {
    size_t rows = 0, cols = 0;
    std::vector<ZZ> a;

    IntMatrix() = default;
    IntMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, ZZ(0)) {}

    ZZ& at(size_t i, size_t j) { return a[i * cols + j]; }
    const ZZ& at(size_t i, size_t j) const { return a[i * cols + j]; }

    ZZ max_abs() const;
};

// Basis of the integer nullspace {v : M v = 0}; each vector primitive, greedily
// size-reduced. Empty iff the kernel is trivial. When cols > rows, the first
// vector's max-norm is checked against the (rows·maxentry)^(rows/(cols-rows))
// solvability bound by the caller's tests.
std::vector<std::vector<ZZ>> integer_kernel(const IntMatrix& M);

// Sparse variant for very large underdetermined systems: returns a single
// primitive kernel vector (first found) without computing a full basis.
struct SparseRow {
    std::vector<std::pair<size_t, ZZ>> entries;  // (col, value), sorted by col
};
std::vector<ZZ> sparse_kernel_vector(const std::vector<SparseRow>& rows, size_t cols);

}  // namespace abctk
