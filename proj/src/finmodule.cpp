#include "koszulpk/finmodule.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace kpk {

FinModule::FinModule(CoeffRing ring, std::vector<std::uint32_t> exponents)
    : R(ring), exps(std::move(exponents)) {
    for (std::uint32_t e : exps)
        if (e < 1 || e > R.k)
            throw Error("FinModule: exponent " + std::to_string(e) + " outside [1, k=" +
                        std::to_string(R.k) + "]");
}

std::uint64_t FinModule::length() const {
    std::uint64_t s = 0;
    for (std::uint32_t e : exps) s += e;
    return s;
}

Matrix FinModule::relations() const {
    std::vector<std::uint32_t> d(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) d[i] = R.ppow_mod(exps[i]);
    return Matrix::diagonal(R, d);
}

FinModule cokernel_module(const Matrix& relations, std::size_t gens) {
    if (relations.nrows != gens) throw ShapeMismatch("cokernel_module: row count != gens");
    std::vector<std::uint32_t> exps;
    auto diag = snf_exponents(relations);
    for (std::uint32_t a : diag)
        if (a > 0) exps.push_back(a);
    for (std::size_t i = diag.size(); i < gens; ++i) exps.push_back(relations.R.k);
    return FinModule(relations.R, std::move(exps));
}

FinMorphism::FinMorphism(FinModule source, FinModule target, Matrix lift)
    : src(std::move(source)), tgt(std::move(target)), mat(std::move(lift)) {
    if (src.R != tgt.R || mat.R != src.R)
        throw ShapeMismatch("FinMorphism: rings differ");
    if (mat.nrows != tgt.rank() || mat.ncols != src.rank())
        throw ShapeMismatch("FinMorphism: matrix is " + std::to_string(mat.nrows) + "x" +
                            std::to_string(mat.ncols) + ", expected " +
                            std::to_string(tgt.rank()) + "x" + std::to_string(src.rank()));
    const CoeffRing& R = src.R;
    for (std::size_t i = 0; i < mat.nrows; ++i)
        for (std::size_t j = 0; j < mat.ncols; ++j) {
            std::uint32_t fi = tgt.exps[i], ej = src.exps[j];
            if (fi <= ej) continue;
            std::uint32_t need = fi - ej;
            if (R.valuation(mat.at(i, j)) < need)
                throw NotAMorphism("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") = " + std::to_string(mat.at(i, j)) + " needs valuation >= " +
                                   std::to_string(need) + " (target exp " + std::to_string(fi) +
                                   ", source exp " + std::to_string(ej) + ")");
        }
}

FinMorphism FinMorphism::zero(FinModule source, FinModule target) {
    Matrix z(source.R, target.rank(), source.rank());
    return FinMorphism(std::move(source), std::move(target), std::move(z));
}

FinMorphism FinMorphism::identity(FinModule m) {
    Matrix i = Matrix::identity(m.R, m.rank());
    FinModule cp = m;
    return FinMorphism(std::move(cp), std::move(m), std::move(i));
}

FinMorphism FinMorphism::scalar(FinModule m, std::uint32_t c) {
    Matrix s = mat_scaled(c % m.R.q, Matrix::identity(m.R, m.rank()));
    FinModule cp = m;
    return FinMorphism(std::move(cp), std::move(m), std::move(s));
}

std::uint64_t IsoType::length() const {
    return std::accumulate(exps.begin(), exps.end(), std::uint64_t{0});
}

std::string IsoType::describe(std::uint32_t p) const {
    if (exps.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i) s += " + ";
        std::uint64_t m = 1;
        for (std::uint32_t j = 0; j < exps[i]; ++j) m *= p;
        s += "Z/" + std::to_string(m);
    }
    return s;
}

IsoType iso_type(const FinModule& m) {
    IsoType t{m.exps};
    std::sort(t.exps.begin(), t.exps.end(), std::greater<>());
    return t;
}

FinMorphism compose(const FinMorphism& f, const FinMorphism& g) {
    if (g.tgt != f.src) throw ShapeMismatch("compose: middle modules differ");
    return FinMorphism(g.src, f.tgt, mat_mul(f.mat, g.mat));
}

FinMorphism add(const FinMorphism& f, const FinMorphism& g) {
    if (f.src != g.src || f.tgt != g.tgt) throw ShapeMismatch("add: shapes differ");
    return FinMorphism(f.src, f.tgt, mat_add(f.mat, g.mat));
}

FinMorphism scaled(std::uint32_t c, const FinMorphism& f) {
    return FinMorphism(f.src, f.tgt, mat_scaled(c, f.mat));
}

bool is_zero_morphism(const FinMorphism& f) {
    const CoeffRing& R = f.mat.R;
    for (std::size_t i = 0; i < f.mat.nrows; ++i)
        for (std::size_t j = 0; j < f.mat.ncols; ++j)
            if (R.valuation(f.mat.at(i, j)) < f.tgt.exps[i]) return false;
    return true;
}

bool morphisms_equal(const FinMorphism& f, const FinMorphism& g) {
    if (f.src != g.src || f.tgt != g.tgt) return false;
    return is_zero_morphism(FinMorphism(f.src, f.tgt, mat_sub(f.mat, g.mat)));
}

FinModule direct_sum(const FinModule& a, const FinModule& b) {
    if (a.R != b.R) throw ShapeMismatch("direct_sum: rings differ");
    std::vector<std::uint32_t> e = a.exps;
    e.insert(e.end(), b.exps.begin(), b.exps.end());
    return FinModule(a.R, std::move(e));
}

FinMorphism direct_sum(const FinMorphism& f, const FinMorphism& g) {
    FinModule s = direct_sum(f.src, g.src);
    FinModule t = direct_sum(f.tgt, g.tgt);
    Matrix m(f.mat.R, t.rank(), s.rank());
    for (std::size_t i = 0; i < f.mat.nrows; ++i)
        for (std::size_t j = 0; j < f.mat.ncols; ++j) m.at(i, j) = f.mat.at(i, j);
    for (std::size_t i = 0; i < g.mat.nrows; ++i)
        for (std::size_t j = 0; j < g.mat.ncols; ++j)
            m.at(f.mat.nrows + i, f.mat.ncols + j) = g.mat.at(i, j);
    return FinMorphism(std::move(s), std::move(t), std::move(m));
}

std::uint64_t length(const FinModule& m) { return m.length(); }

std::uint64_t image_length(const FinMorphism& f) {
    // lambda(im f) inside tgt = lambda(im [lift | relations]) - lambda(im relations).
    std::uint64_t rel = 0;
    for (std::uint32_t e : f.tgt.exps) rel += f.tgt.R.k - e;
    return image_length(hcat(f.mat, f.tgt.relations())) - rel;
}

std::uint64_t kernel_length(const FinMorphism& f) {
    return f.src.length() - image_length(f);
}

namespace {

void require_complex(const FinMorphism& d_in, const FinMorphism& d_out) {
    if (d_in.tgt != d_out.src)
        throw ShapeMismatch("homology: d_in target differs from d_out source");
    if (!is_zero_morphism(compose(d_out, d_in)))
        throw NotAComplex("d_out o d_in is not the zero morphism");
}

} // namespace

std::uint64_t homology_length_at(const FinMorphism& d_in, const FinMorphism& d_out) {
    require_complex(d_in, d_out);
    // lambda(ker d_out) - lambda(im d_in), with the kernel length obtained
    // from additivity: lambda(ker) = lambda(middle) - lambda(im d_out).
    return d_in.tgt.length() - image_length(d_out) - image_length(d_in);
}

IsoType subquotient_iso_type(const FinMorphism& d_in, const FinMorphism& d_out) {
    require_complex(d_in, d_out);
    const FinModule& mid = d_in.tgt;
    const CoeffRing& R = mid.R;

    // Generators of ker(d_out) as a submodule of the free cover of mid:
    // project the kernel of [lift | -relations] onto the cover coordinates.
    Matrix window = hcat(d_out.mat, mat_neg(d_out.tgt.relations()));
    Matrix ker = kernel_generators(window);
    Matrix G = submatrix_rows(ker, 0, mid.rank());

    // Denominator: im(d_in) + relations of mid.
    Matrix A = hcat(d_in.mat, mid.relations());
    std::uint64_t base = image_length(A);

    // lambda(p^j H) for j = 0..k determines the elementary divisors.
    std::vector<std::uint64_t> ell(R.k + 1, 0);
    for (std::uint32_t j = 0; j <= R.k; ++j) {
        Matrix pjG = mat_scaled(R.ppow_mod(j), G);
        ell[j] = image_length(hcat(pjG, A)) - base;
    }
    IsoType t;
    for (std::uint32_t e = R.k; e >= 1; --e) {
        // count of factors with exponent exactly e
        std::uint64_t above_e = ell[e - 1] - ell[e];          // # factors with exp > e-1
        std::uint64_t above_next = (e < R.k) ? ell[e] - ell[e + 1] : 0;
        std::uint64_t cnt = above_e - above_next;
        for (std::uint64_t c = 0; c < cnt; ++c) t.exps.push_back(e);
    }
    std::sort(t.exps.begin(), t.exps.end(), std::greater<>());
    return t;
}

IsoType quotient_iso_type(const FinModule& m, const std::vector<FinMorphism>& fs) {
    FinModule source(m.R, {});
    for (const FinMorphism& f : fs) {
        if (f.tgt != m) throw ShapeMismatch("quotient_iso_type: target is not m");
        source = direct_sum(source, f.src);
    }
    // Treat as the subquotient m / (sum of images): d_out = 0, d_in = combined.
    Matrix lift(m.R, m.rank(), source.rank());
    std::size_t off = 0;
    for (const FinMorphism& f : fs) {
        for (std::size_t i = 0; i < m.rank(); ++i)
            for (std::size_t j = 0; j < f.mat.ncols; ++j) lift.at(i, off + j) = f.mat.at(i, j);
        off += f.mat.ncols;
    }
    FinMorphism d_in(source, m, lift);
    FinMorphism d_out = FinMorphism::zero(m, FinModule(m.R, {}));
    return subquotient_iso_type(d_in, d_out);
}

IsoType kernel_intersection_iso_type(const FinModule& m, const std::vector<FinMorphism>& fs) {
    FinModule target(m.R, {});
    Matrix stack(m.R, 0, m.rank());
    for (const FinMorphism& f : fs) {
        if (f.src != m) throw ShapeMismatch("kernel_intersection_iso_type: source is not m");
        stack = vcat(stack, f.mat);
        target = direct_sum(target, f.tgt);
    }
    FinMorphism stacked(m, target, stack);
    FinMorphism d_in = FinMorphism::zero(FinModule(m.R, {}), m);
    return subquotient_iso_type(d_in, stacked);
}

} // namespace kpk
