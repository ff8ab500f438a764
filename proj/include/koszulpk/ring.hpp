#pragma once
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace kpk {

/// The coefficient ring Z/p^k with p prime and p^k <= 2^31.
/// Elements are canonical representatives in [0, p^k).
struct CoeffRing {
    std::uint32_t p = 2;
    std::uint32_t k = 1;
    std::uint32_t q = 2;               // p^k
    std::uint64_t barrett_m = ~0ull / 2; // floor((2^64-1)/q), for reduction

    CoeffRing() = default;
    CoeffRing(std::uint32_t p_, std::uint32_t k_);

    bool operator==(const CoeffRing& o) const { return p == o.p && k == o.k; }
    bool operator!=(const CoeffRing& o) const { return !(*this == o); }

    std::uint32_t reduce64(std::uint64_t x) const {
        std::uint64_t qq = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * barrett_m) >> 64);
        std::uint64_t r = x - qq * q;
        while (r >= q) r -= q;
        return static_cast<std::uint32_t>(r);
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b; // q <= 2^31, no overflow
        return s >= q ? s - q : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + q - b;
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return reduce64(static_cast<std::uint64_t>(a) * b);
    }

    /// p^a as a plain integer; requires a <= k.
    std::uint32_t ppow(std::uint32_t a) const;
    /// p^a mod p^k; equals 0 when a == k.
    std::uint32_t ppow_mod(std::uint32_t a) const { return a >= k ? 0 : ppow(a); }

    /// Largest a <= k with p^a dividing the canonical representative; k for 0.
    std::uint32_t valuation(std::uint32_t x) const {
        if (x == 0) return k;
        std::uint32_t v = 0;
        while (x % p == 0) {
            x /= p;
            ++v;
        }
        return v;
    }

    bool is_unit(std::uint32_t x) const { return x % p != 0; }

    /// Inverse of a unit; throws NotAUnit on inputs of positive valuation.
    std::uint32_t inv_unit(std::uint32_t x) const;

    /// Exact division by p^a; requires valuation(x) >= a.
    std::uint32_t div_ppow(std::uint32_t x, std::uint32_t a) const;

    std::string describe() const; // "Z/p^k"
};

/// Strongly typed ring element, the public face of a bare value.
struct Scalar {
    std::uint32_t value = 0;
    CoeffRing ring;

    Scalar() = default;
    Scalar(std::uint32_t v, CoeffRing R) : value(v % R.q), ring(R) {}

    std::uint32_t valuation() const { return ring.valuation(value); }
    bool is_unit() const { return ring.is_unit(value); }
    Scalar inverse() const { return Scalar(ring.inv_unit(value), ring); }
};

/// Dense row-major matrix over a CoeffRing.
struct Matrix {
    CoeffRing R;
    std::size_t nrows = 0;
    std::size_t ncols = 0;
    std::vector<std::uint32_t> a;

    Matrix() = default;
    Matrix(CoeffRing ring, std::size_t rows, std::size_t cols)
        : R(ring), nrows(rows), ncols(cols), a(rows * cols, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * ncols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * ncols + j]; }
    std::uint32_t* row(std::size_t i) { return a.data() + i * ncols; }
    const std::uint32_t* row(std::size_t i) const { return a.data() + i * ncols; }

    static Matrix identity(CoeffRing ring, std::size_t n);
    static Matrix diagonal(CoeffRing ring, const std::vector<std::uint32_t>& d);

    bool is_zero() const;
    bool operator==(const Matrix& o) const {
        return R == o.R && nrows == o.nrows && ncols == o.ncols && a == o.a;
    }
};

Matrix mat_mul(const Matrix& A, const Matrix& B);
Matrix mat_add(const Matrix& A, const Matrix& B);
Matrix mat_sub(const Matrix& A, const Matrix& B);
Matrix mat_neg(const Matrix& A);
Matrix mat_scaled(std::uint32_t c, const Matrix& A);
/// [A | B] side by side.
Matrix hcat(const Matrix& A, const Matrix& B);
/// A stacked on top of B.
Matrix vcat(const Matrix& A, const Matrix& B);
Matrix submatrix_rows(const Matrix& A, std::size_t row0, std::size_t nrows);
Matrix select_columns(const Matrix& A, const std::vector<std::size_t>& idx);
Matrix select_rows(const Matrix& A, const std::vector<std::size_t>& idx);

/// Smith normal form data over Z/p^k: U*A*V = diag(p^exponents), with the
/// diagonal padded by zeros (exponent k) up to min(rows, cols).
struct SNFResult {
    std::vector<std::uint32_t> exponents; // nondecreasing, each in [0, k]
    Matrix U, V;                          // invertible transforms
    Matrix Uinv, Vinv;                    // their inverses, maintained alongside

    Matrix diagonal_matrix(const CoeffRing& R, std::size_t rows, std::size_t cols) const;
};

/// Full SNF with transforms. Deterministic: the pivot is the first entry of
/// minimal valuation in row-major order of the remaining submatrix, scaled by
/// a unit to a pure p-power.
SNFResult smith_normal_form(const Matrix& A);

/// Diagonal exponents only (same pivot rule, no transform bookkeeping).
std::vector<std::uint32_t> snf_exponents(Matrix A);

/// Length of the image submodule of the column span of A inside (Z/p^k)^rows:
/// sum of (k - a_i) over the SNF exponents.
std::uint64_t image_length(const Matrix& A);

/// Columns generate ker(A) as a submodule of (Z/p^k)^cols.
Matrix kernel_generators(const Matrix& A);

/// True iff A has an inverse over Z/p^k (all SNF exponents zero).
bool is_invertible(const Matrix& A);

} // namespace kpk
