#pragma once
#include <cstdint>
#include <vector>

#include "ring.hpp"

namespace kpk {

/// A finite-length Z/p^k-module in elementary-divisor form: the direct sum of
/// Z/p^{e_i} with 1 <= e_i <= k. The zero module has an empty exponent list.
struct FinModule {
    CoeffRing R;
    std::vector<std::uint32_t> exps;

    FinModule() = default;
    FinModule(CoeffRing ring, std::vector<std::uint32_t> exponents);

    std::size_t rank() const { return exps.size(); } // number of cyclic factors
    std::uint64_t length() const;
    bool is_zero() const { return exps.empty(); }

    /// diag(p^{e_i}) as a matrix over Z/p^k; its cokernel is this module.
    Matrix relations() const;

    bool operator==(const FinModule& o) const { return R == o.R && exps == o.exps; }
    bool operator!=(const FinModule& o) const { return !(*this == o); }
};

/// Normalize the cokernel of an arbitrary relation matrix on (Z/p^k)^gens
/// into elementary-divisor form (zero factors dropped).
FinModule cokernel_module(const Matrix& relations, std::size_t gens);

/// A module map given by a lift on free covers. Well-definedness demands the
/// congruence v(m[i][j]) >= max(0, f_i - e_j) entrywise; the constructor
/// checks it and reports the first violating entry.
struct FinMorphism {
    FinModule src;
    FinModule tgt;
    Matrix mat; // tgt.rank() x src.rank()

    FinMorphism() = default;
    FinMorphism(FinModule source, FinModule target, Matrix lift);

    static FinMorphism zero(FinModule source, FinModule target);
    static FinMorphism identity(FinModule m);
    /// Multiplication by a fixed scalar.
    static FinMorphism scalar(FinModule m, std::uint32_t c);
};

/// Canonical isomorphism type: exponents sorted non-increasing.
struct IsoType {
    std::vector<std::uint32_t> exps;

    std::uint64_t length() const;
    bool operator==(const IsoType& o) const { return exps == o.exps; }
    bool operator!=(const IsoType& o) const { return !(*this == o); }
    std::string describe(std::uint32_t p) const; // e.g. "Z/4 + Z/2"
};

IsoType iso_type(const FinModule& m);

// --- morphism algebra -------------------------------------------------------

/// f after g.
FinMorphism compose(const FinMorphism& f, const FinMorphism& g);
FinMorphism add(const FinMorphism& f, const FinMorphism& g);
FinMorphism scaled(std::uint32_t c, const FinMorphism& f);

/// Zero as a map (the matrix may be nonzero yet act as zero on the target).
bool is_zero_morphism(const FinMorphism& f);
bool morphisms_equal(const FinMorphism& f, const FinMorphism& g);

FinModule direct_sum(const FinModule& a, const FinModule& b);
/// Block-diagonal morphism on a direct sum.
FinMorphism direct_sum(const FinMorphism& f, const FinMorphism& g);

// --- lengths and homology ---------------------------------------------------

std::uint64_t length(const FinModule& m);
std::uint64_t image_length(const FinMorphism& f);
std::uint64_t kernel_length(const FinMorphism& f);

/// lambda(ker d_out / im d_in) for a two-step complex around a middle module.
/// Throws NotAComplex unless d_out o d_in = 0.
std::uint64_t homology_length_at(const FinMorphism& d_in, const FinMorphism& d_out);

/// Elementary divisors of the subquotient ker(d_out)/im(d_in).
IsoType subquotient_iso_type(const FinMorphism& d_in, const FinMorphism& d_out);

/// Iso type of m / (im f_1 + ... + im f_r) for morphisms f_i into m.
IsoType quotient_iso_type(const FinModule& m, const std::vector<FinMorphism>& fs);

/// Iso type of the intersection of kernels of morphisms out of m.
IsoType kernel_intersection_iso_type(const FinModule& m, const std::vector<FinMorphism>& fs);

} // namespace kpk
