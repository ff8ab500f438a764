#include "koszulpk/ring.hpp"

#include <algorithm>
#include <cstdlib>

namespace kpk {

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

} // namespace

CoeffRing::CoeffRing(std::uint32_t p_, std::uint32_t k_) : p(p_), k(k_) {
    if (!is_prime_u32(p)) throw Error("CoeffRing: p = " + std::to_string(p) + " is not prime");
    if (k < 1) throw Error("CoeffRing: k must be >= 1");
    // Desk-scale bound: p^k <= 2^31 so products fit in 64 bits.
    std::uint64_t qq = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        qq *= p;
        if (qq > (1ull << 31))
            throw Error("CoeffRing: p^k exceeds 2^31 (p=" + std::to_string(p) +
                        ", k=" + std::to_string(k) + ")");
    }
    q = static_cast<std::uint32_t>(qq);
    barrett_m = ~0ull / q;
}

std::uint32_t CoeffRing::ppow(std::uint32_t a) const {
    std::uint32_t r = 1;
    for (std::uint32_t i = 0; i < a; ++i) r *= p;
    return r;
}

std::uint32_t CoeffRing::inv_unit(std::uint32_t x) const {
    if (x % p == 0)
        throw NotAUnit("value " + std::to_string(x) + " has positive valuation in " + describe());
    // Extended Euclid on (x, q).
    std::int64_t r0 = q, r1 = x, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t f = r0 / r1;
        std::int64_t r2 = r0 - f * r1;
        std::int64_t s2 = s0 - f * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    std::int64_t s = s0 % static_cast<std::int64_t>(q);
    if (s < 0) s += q;
    return static_cast<std::uint32_t>(s);
}

std::uint32_t CoeffRing::div_ppow(std::uint32_t x, std::uint32_t a) const {
    std::uint32_t d = ppow(a);
    if (x % d != 0)
        throw Error("div_ppow: " + std::to_string(x) + " not divisible by p^" + std::to_string(a));
    return x / d;
}

std::string CoeffRing::describe() const {
    return "Z/" + std::to_string(p) + "^" + std::to_string(k);
}

Matrix Matrix::identity(CoeffRing ring, std::size_t n) {
    Matrix I(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

Matrix Matrix::diagonal(CoeffRing ring, const std::vector<std::uint32_t>& d) {
    Matrix D(ring, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) D.at(i, i) = d[i] % ring.q;
    return D;
}

bool Matrix::is_zero() const {
    for (std::uint32_t x : a)
        if (x != 0) return false;
    return true;
}

Matrix mat_mul(const Matrix& A, const Matrix& B) {
    if (A.R != B.R) throw ShapeMismatch("mat_mul: rings differ");
    if (A.ncols != B.nrows)
        throw ShapeMismatch("mat_mul: " + std::to_string(A.ncols) + " cols vs " +
                            std::to_string(B.nrows) + " rows");
    const CoeffRing& R = A.R;
    Matrix C(R, A.nrows, B.ncols);
    for (std::size_t i = 0; i < A.nrows; ++i) {
        std::uint32_t* ci = C.row(i);
        const std::uint32_t* ai = A.row(i);
        for (std::size_t l = 0; l < A.ncols; ++l) {
            std::uint64_t ail = ai[l];
            if (ail == 0) continue;
            const std::uint32_t* bl = B.row(l);
            for (std::size_t j = 0; j < B.ncols; ++j)
                ci[j] = R.reduce64(ci[j] + ail * bl[j]);
        }
    }
    return C;
}

Matrix mat_add(const Matrix& A, const Matrix& B) {
    if (A.R != B.R || A.nrows != B.nrows || A.ncols != B.ncols)
        throw ShapeMismatch("mat_add: incompatible shapes");
    Matrix C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.R.add(A.a[i], B.a[i]);
    return C;
}

Matrix mat_sub(const Matrix& A, const Matrix& B) {
    if (A.R != B.R || A.nrows != B.nrows || A.ncols != B.ncols)
        throw ShapeMismatch("mat_sub: incompatible shapes");
    Matrix C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.R.sub(A.a[i], B.a[i]);
    return C;
}

Matrix mat_neg(const Matrix& A) {
    Matrix C = A;
    for (auto& x : C.a) x = A.R.neg(x);
    return C;
}

Matrix mat_scaled(std::uint32_t c, const Matrix& A) {
    Matrix C = A;
    for (auto& x : C.a) x = A.R.mul(c, x);
    return C;
}

Matrix hcat(const Matrix& A, const Matrix& B) {
    if (A.R != B.R || A.nrows != B.nrows) throw ShapeMismatch("hcat: row counts differ");
    Matrix C(A.R, A.nrows, A.ncols + B.ncols);
    for (std::size_t i = 0; i < A.nrows; ++i) {
        std::copy(A.row(i), A.row(i) + A.ncols, C.row(i));
        std::copy(B.row(i), B.row(i) + B.ncols, C.row(i) + A.ncols);
    }
    return C;
}

Matrix vcat(const Matrix& A, const Matrix& B) {
    if (A.R != B.R || A.ncols != B.ncols) throw ShapeMismatch("vcat: col counts differ");
    Matrix C(A.R, A.nrows + B.nrows, A.ncols);
    std::copy(A.a.begin(), A.a.end(), C.a.begin());
    std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
    return C;
}

Matrix submatrix_rows(const Matrix& A, std::size_t row0, std::size_t nrows) {
    Matrix C(A.R, nrows, A.ncols);
    std::copy(A.row(row0), A.row(row0) + nrows * A.ncols, C.a.begin());
    return C;
}

Matrix select_columns(const Matrix& A, const std::vector<std::size_t>& idx) {
    Matrix C(A.R, A.nrows, idx.size());
    for (std::size_t i = 0; i < A.nrows; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) C.at(i, j) = A.at(i, idx[j]);
    return C;
}

Matrix select_rows(const Matrix& A, const std::vector<std::size_t>& idx) {
    Matrix C(A.R, idx.size(), A.ncols);
    for (std::size_t i = 0; i < idx.size(); ++i)
        std::copy(A.row(idx[i]), A.row(idx[i]) + A.ncols, C.row(i));
    return C;
}

Matrix SNFResult::diagonal_matrix(const CoeffRing& R, std::size_t rows, std::size_t cols) const {
    Matrix D(R, rows, cols);
    for (std::size_t i = 0; i < exponents.size(); ++i) D.at(i, i) = R.ppow_mod(exponents[i]);
    return D;
}

namespace {

// Shared reduction kernel. When `res` is non-null the four transforms are
// maintained so that U*A*V = D holds after every elementary operation.
void snf_reduce(Matrix& D, std::vector<std::uint32_t>& exps, SNFResult* res) {
    const CoeffRing R = D.R;
    const std::size_t m = D.nrows, n = D.ncols;
    const std::size_t steps = std::min(m, n);
    exps.assign(steps, R.k);

    if (res) {
        res->U = Matrix::identity(R, m);
        res->Uinv = Matrix::identity(R, m);
        res->V = Matrix::identity(R, n);
        res->Vinv = Matrix::identity(R, n);
    }

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < n; ++c) std::swap(D.at(i, c), D.at(j, c));
        if (res) {
            for (std::size_t c = 0; c < m; ++c) std::swap(res->U.at(i, c), res->U.at(j, c));
            for (std::size_t r = 0; r < m; ++r) std::swap(res->Uinv.at(r, i), res->Uinv.at(r, j));
        }
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < m; ++r) std::swap(D.at(r, i), D.at(r, j));
        if (res) {
            for (std::size_t r = 0; r < n; ++r) std::swap(res->V.at(r, i), res->V.at(r, j));
            for (std::size_t c = 0; c < n; ++c) std::swap(res->Vinv.at(i, c), res->Vinv.at(j, c));
        }
    };
    auto scale_row = [&](std::size_t i, std::uint32_t c) {
        std::uint32_t cinv = R.inv_unit(c);
        for (std::size_t j = 0; j < n; ++j) D.at(i, j) = R.mul(c, D.at(i, j));
        if (res) {
            for (std::size_t j = 0; j < m; ++j) res->U.at(i, j) = R.mul(c, res->U.at(i, j));
            for (std::size_t r = 0; r < m; ++r) res->Uinv.at(r, i) = R.mul(cinv, res->Uinv.at(r, i));
        }
    };
    // row_i -= f * row_t
    auto row_axpy = [&](std::size_t i, std::size_t t, std::uint32_t f) {
        const std::uint32_t* rt = D.row(t);
        std::uint32_t* ri = D.row(i);
        for (std::size_t j = 0; j < n; ++j)
            if (rt[j]) ri[j] = R.sub(ri[j], R.mul(f, rt[j]));
        if (res) {
            for (std::size_t j = 0; j < m; ++j)
                res->U.at(i, j) = R.sub(res->U.at(i, j), R.mul(f, res->U.at(t, j)));
            for (std::size_t r = 0; r < m; ++r)
                res->Uinv.at(r, t) = R.add(res->Uinv.at(r, t), R.mul(f, res->Uinv.at(r, i)));
        }
    };
    // col_j -= f * col_t
    auto col_axpy = [&](std::size_t j, std::size_t t, std::uint32_t f) {
        for (std::size_t r = 0; r < m; ++r)
            if (D.at(r, t)) D.at(r, j) = R.sub(D.at(r, j), R.mul(f, D.at(r, t)));
        if (res) {
            for (std::size_t r = 0; r < n; ++r)
                res->V.at(r, j) = R.sub(res->V.at(r, j), R.mul(f, res->V.at(r, t)));
            for (std::size_t c = 0; c < n; ++c)
                res->Vinv.at(t, c) = R.add(res->Vinv.at(t, c), R.mul(f, res->Vinv.at(j, c)));
        }
    };

    for (std::size_t t = 0; t < steps; ++t) {
        // First entry of minimal valuation in row-major order.
        std::uint32_t best_v = R.k;
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < m && best_v > 0; ++i)
            for (std::size_t j = t; j < n; ++j) {
                std::uint32_t x = D.at(i, j);
                if (x == 0) continue;
                std::uint32_t v = R.valuation(x);
                if (v < best_v) {
                    best_v = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best_v == R.k) break; // remaining submatrix is zero
        swap_rows(t, bi);
        swap_cols(t, bj);

        const std::uint32_t a = best_v;
        const std::uint32_t pa = R.ppow(a);
        std::uint32_t u = D.at(t, t) / pa; // unit part, exact by choice of a
        if (u != 1) scale_row(t, R.inv_unit(u));
        // Pivot is now exactly p^a; all remaining entries have valuation >= a,
        // so the quotients below are exact and exponents come out nondecreasing.
        for (std::size_t i = t + 1; i < m; ++i) {
            std::uint32_t x = D.at(i, t);
            if (x) row_axpy(i, t, x / pa);
        }
        for (std::size_t j = t + 1; j < n; ++j) {
            std::uint32_t x = D.at(t, j);
            if (x) col_axpy(j, t, x / pa);
        }
        exps[t] = a;
    }
}

} // namespace

SNFResult smith_normal_form(const Matrix& A) {
    Matrix D = A;
    SNFResult res;
    snf_reduce(D, res.exponents, &res);
    return res;
}

std::vector<std::uint32_t> snf_exponents(Matrix A) {
    std::vector<std::uint32_t> exps;
    snf_reduce(A, exps, nullptr);
    return exps;
}

std::uint64_t image_length(const Matrix& A) {
    std::uint64_t len = 0;
    for (std::uint32_t a : snf_exponents(A)) len += A.R.k - a;
    return len;
}

Matrix kernel_generators(const Matrix& A) {
    SNFResult snf = smith_normal_form(A);
    const CoeffRing& R = A.R;
    std::vector<std::size_t> keep;
    std::vector<std::uint32_t> scale;
    for (std::size_t i = 0; i < snf.exponents.size(); ++i) {
        std::uint32_t a = snf.exponents[i];
        if (a == 0) continue; // unit pivot, no kernel contribution
        keep.push_back(i);
        scale.push_back(R.ppow_mod(R.k - a));
    }
    for (std::size_t j = snf.exponents.size(); j < A.ncols; ++j) {
        keep.push_back(j);
        scale.push_back(1);
    }
    Matrix G(R, A.ncols, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c)
        for (std::size_t r = 0; r < A.ncols; ++r)
            G.at(r, c) = R.mul(scale[c], snf.V.at(r, keep[c]));
    return G;
}

bool is_invertible(const Matrix& A) {
    if (A.nrows != A.ncols) return false;
    for (std::uint32_t a : snf_exponents(A))
        if (a != 0) return false;
    return true;
}

} // namespace kpk
