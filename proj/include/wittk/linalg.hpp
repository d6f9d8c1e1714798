#pragma once

#include <vector>

#include "wittk/abelian.hpp"
#include "wittk/bigint.hpp"

namespace wittk {

// Dense integer matrix, row-major. Small sizes, exact arithmetic only.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<BigInt> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    static Mat identity(std::size_t n);

    BigInt& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

Mat mat_mul(const Mat& x, const Mat& y);
// [x | y] side by side; row counts must match.
Mat mat_hjoin(const Mat& x, const Mat& y);
Mat mat_scale(const Mat& x, const BigInt& c);

struct SmithResult {
    std::vector<BigInt> diagonal;  // d_1 | d_2 | ..., non-negative
    std::size_t rank = 0;          // number of nonzero diagonal entries
    Mat U, V;                      // U * A * V = D when transforms requested
};

// Smith normal form over Z. with_transforms tracks unimodular U, V.
SmithResult smith_normal_form(Mat m, bool with_transforms = false);

// Column Hermite normal form of the lattice spanned by the columns.
// Canonical: two generating sets of the same lattice produce equal output.
Mat column_hnf(const Mat& m);

// Basis of the integer kernel {x : A x = 0}, as columns.
Mat kernel_basis(const Mat& m);

// Does y lie in the column span of A over Z?
bool in_column_span(const Mat& a, const std::vector<BigInt>& y);

// Invariants of L / S where the lattices are given by generating columns,
// S (subset of) L, and the quotient is a finite p-group (callers arrange this
// by including p^M generators). Returns the canonical AbelianPGroup.
AbelianPGroup lattice_quotient(const Mat& l_gens, const Mat& s_gens, long p);

// Abelian group type of coker(A : Z^cols -> Z^rows / p^M), i.e. the module
// (Z/p^M)^rows / column span of A.
AbelianPGroup cokernel_mod_pM(const Mat& a, long p, int M);

}  // namespace wittk
