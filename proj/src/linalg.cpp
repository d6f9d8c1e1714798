#include "wittk/linalg.hpp"

#include <algorithm>

#include "wittk/errors.hpp"

namespace wittk {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw DomainError("mat_mul: dimension mismatch");
    Mat r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                r.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return r;
}

Mat mat_hjoin(const Mat& x, const Mat& y) {
    if (x.rows != y.rows) throw DomainError("mat_hjoin: row mismatch");
    Mat r(x.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
        for (std::size_t j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

Mat mat_scale(const Mat& x, const BigInt& c) {
    Mat r = x;
    for (auto& v : r.a) v *= c;
    return r;
}

namespace {

void swap_rows(Mat& m, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

void swap_cols(Mat& m, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

// row_i += q * row_j
void add_row(Mat& m, std::size_t i, std::size_t j, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < m.cols; ++c) m.at(i, c) += q * m.at(j, c);
}

void add_col(Mat& m, std::size_t i, std::size_t j, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < m.rows; ++r) m.at(r, i) += q * m.at(r, j);
}

}  // namespace

SmithResult smith_normal_form(Mat m, bool with_transforms) {
    SmithResult res;
    const std::size_t n = std::min(m.rows, m.cols);
    Mat U = with_transforms ? Mat::identity(m.rows) : Mat();
    Mat V = with_transforms ? Mat::identity(m.cols) : Mat();

    for (std::size_t t = 0; t < n; ++t) {
        // pivot: smallest nonzero absolute value in the trailing block
        std::size_t pi = t, pj = t;
        BigInt best = 0;
        for (std::size_t i = t; i < m.rows; ++i)
            for (std::size_t j = t; j < m.cols; ++j) {
                if (m.at(i, j) == 0) continue;
                BigInt v = abs(m.at(i, j));
                if (best == 0 || v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0) break;
        swap_rows(m, t, pi);
        if (with_transforms) swap_rows(U, t, pi);
        swap_cols(m, t, pj);
        if (with_transforms) swap_cols(V, t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < m.rows; ++i) {
                if (m.at(i, t) == 0) continue;
                BigInt q = m.at(i, t) / m.at(t, t);
                add_row(m, i, t, -q);
                if (with_transforms) add_row(U, i, t, -q);
                if (m.at(i, t) != 0) {
                    swap_rows(m, t, i);
                    if (with_transforms) swap_rows(U, t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < m.cols; ++j) {
                if (m.at(t, j) == 0) continue;
                BigInt q = m.at(t, j) / m.at(t, t);
                add_col(m, j, t, -q);
                if (with_transforms) add_col(V, j, t, -q);
                if (m.at(t, j) != 0) {
                    swap_cols(m, t, j);
                    if (with_transforms) swap_cols(V, t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // divisibility: pivot must divide every trailing entry
            for (std::size_t i = t + 1; i < m.rows && clean; ++i)
                for (std::size_t j = t + 1; j < m.cols && clean; ++j)
                    if (m.at(i, j) % m.at(t, t) != 0) {
                        add_row(m, t, i, 1);
                        if (with_transforms) add_row(U, t, i, 1);
                        clean = false;
                    }
        }
        if (m.at(t, t) < 0) {
            for (std::size_t j = t; j < m.cols; ++j) m.at(t, j) = -m.at(t, j);
            if (with_transforms)
                for (std::size_t j = 0; j < U.cols; ++j) U.at(t, j) = -U.at(t, j);
        }
    }

    for (std::size_t t = 0; t < n; ++t) {
        res.diagonal.push_back(m.at(t, t));
        if (m.at(t, t) != 0) res.rank = t + 1;
    }
    res.U = std::move(U);
    res.V = std::move(V);
    return res;
}

Mat column_hnf(const Mat& m) {
    Mat h = m;
    std::size_t c0 = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    for (std::size_t r = 0; r < h.rows && c0 < h.cols; ++r) {
        // gcd the row-r entries of columns >= c0 into column c0
        while (true) {
            std::size_t best_j = h.cols;
            BigInt best = 0;
            for (std::size_t j = c0; j < h.cols; ++j) {
                if (h.at(r, j) == 0) continue;
                BigInt v = abs(h.at(r, j));
                if (best == 0 || v < best) {
                    best = v;
                    best_j = j;
                }
            }
            if (best_j == h.cols) break;  // row is zero from c0 on
            swap_cols(h, c0, best_j);
            bool done = true;
            for (std::size_t j = c0 + 1; j < h.cols; ++j) {
                if (h.at(r, j) == 0) continue;
                BigInt q = h.at(r, j) / h.at(r, c0);
                add_col(h, j, c0, -q);
                if (h.at(r, j) != 0) done = false;
            }
            if (done) break;
        }
        if (h.at(r, c0) == 0) continue;
        if (h.at(r, c0) < 0)
            for (std::size_t i = 0; i < h.rows; ++i) h.at(i, c0) = -h.at(i, c0);
        // reduce earlier pivot columns at this row into [0, pivot)
        for (auto& [pr, pc] : pivots) {
            (void)pr;
            BigInt q = floor_div(h.at(r, pc), h.at(r, c0));
            add_col(h, pc, c0, -q);
        }
        pivots.push_back({r, c0});
        ++c0;
    }
    Mat out(h.rows, c0);
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < c0; ++j) out.at(i, j) = h.at(i, j);
    return out;
}

Mat kernel_basis(const Mat& m) {
    SmithResult s = smith_normal_form(m, true);
    Mat k(m.cols, m.cols - s.rank);
    for (std::size_t j = s.rank; j < m.cols; ++j)
        for (std::size_t i = 0; i < m.cols; ++i) k.at(i, j - s.rank) = s.V.at(i, j);
    return k;
}

bool in_column_span(const Mat& a, const std::vector<BigInt>& y) {
    if (y.size() != a.rows) throw DomainError("in_column_span: size mismatch");
    SmithResult s = smith_normal_form(a, true);
    // Solve D z = U y.
    std::vector<BigInt> uy(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        BigInt acc = 0;
        for (std::size_t j = 0; j < a.rows; ++j) acc += s.U.at(i, j) * y[j];
        uy[i] = acc;
    }
    for (std::size_t i = 0; i < a.rows; ++i) {
        if (i < s.rank) {
            if (uy[i] % s.diagonal[i] != 0) return false;
        } else if (uy[i] != 0) {
            return false;
        }
    }
    return true;
}

AbelianPGroup lattice_quotient(const Mat& l_gens, const Mat& s_gens, long p) {
    if (l_gens.rows != s_gens.rows) throw DomainError("lattice_quotient: row mismatch");
    Mat basis = column_hnf(l_gens);
    const std::size_t r = basis.cols;
    // Express each generator of S in the HNF basis by echelon substitution.
    std::vector<std::size_t> pivot_row(r);
    for (std::size_t j = 0; j < r; ++j) {
        std::size_t i = 0;
        while (i < basis.rows && basis.at(i, j) == 0) ++i;
        pivot_row[j] = i;
    }
    Mat x(r, s_gens.cols);
    for (std::size_t c = 0; c < s_gens.cols; ++c) {
        std::vector<BigInt> v(s_gens.rows);
        for (std::size_t i = 0; i < s_gens.rows; ++i) v[i] = s_gens.at(i, c);
        for (std::size_t j = 0; j < r; ++j) {
            std::size_t pr = pivot_row[j];
            if (v[pr] % basis.at(pr, j) != 0)
                throw DomainError("lattice_quotient: S is not contained in L");
            BigInt q = v[pr] / basis.at(pr, j);
            x.at(j, c) = q;
            for (std::size_t i = 0; i < s_gens.rows; ++i) v[i] -= q * basis.at(i, j);
        }
        for (auto& vi : v)
            if (vi != 0) throw DomainError("lattice_quotient: S is not contained in L");
    }
    SmithResult s = smith_normal_form(x, false);
    AbelianPGroup g{p, {}, 0};
    if (s.rank < r) throw DomainError("lattice_quotient: quotient is infinite");
    for (std::size_t t = 0; t < s.rank; ++t) {
        BigInt d = s.diagonal[t];
        int e = 0;
        while (d % p == 0) {
            d /= p;
            ++e;
        }
        if (d != 1) throw DomainError("lattice_quotient: quotient is not a p-group");
        if (e > 0) g.exponents.push_back(e);
    }
    g.canonicalize();
    return g;
}

AbelianPGroup cokernel_mod_pM(const Mat& a, long p, int M) {
    const BigInt pm = pow_big(BigInt(p), static_cast<unsigned long>(M));
    Mat rel = mat_hjoin(a, mat_scale(Mat::identity(a.rows), pm));
    return lattice_quotient(Mat::identity(a.rows), rel, p);
}

}  // namespace wittk
