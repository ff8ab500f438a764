#pragma once
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "finmodule.hpp"
#include "parallel.hpp"

namespace kpk {

/// Exponent vector, one entry per variable.
using Monomial = std::vector<std::uint32_t>;

std::uint32_t total_degree(const Monomial& m);
/// All monomials of the given total degree, in a fixed lexicographic order.
std::vector<Monomial> monomials_of_degree(std::uint32_t nvars, std::uint32_t d);

/// Sparse polynomial over Z/p^k; terms keyed by monomial, coefficients
/// nonzero and canonical.
struct Polynomial {
    std::uint32_t nvars = 0;
    std::map<Monomial, std::uint32_t> terms;

    static Polynomial zero(std::uint32_t nvars) { return Polynomial{nvars, {}}; }
    static Polynomial constant(const CoeffRing& R, std::uint32_t nvars, std::uint32_t c);
    static Polynomial variable(std::uint32_t nvars, std::uint32_t v);
    static Polynomial term(const CoeffRing& R, std::uint32_t nvars, std::uint32_t c, Monomial m);

    bool is_zero() const { return terms.empty(); }
    /// Total degree when homogeneous; throws InhomogeneousInput otherwise.
    /// The zero polynomial reports degree 0.
    std::uint32_t homogeneous_degree() const;
    std::string describe(const std::vector<std::string>& vars = {}) const;
};

Polynomial poly_add(const CoeffRing& R, const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const CoeffRing& R, const Polynomial& a, const Polynomial& b);
Polynomial poly_pow(const CoeffRing& R, const Polynomial& a, std::uint32_t e);

/// A finitely generated graded module over B = Z/p^k[X_1..X_n] presented by a
/// homogeneous matrix: generator i sits in degree row_degrees[i], relation j
/// in degree col_degrees[j], entry (i,j) homogeneous of degree
/// col_degrees[j] - row_degrees[i] (or zero).
struct GradedPresentation {
    CoeffRing R;
    std::uint32_t nvars = 0;
    std::vector<int> row_degrees;
    std::vector<int> col_degrees;
    std::vector<Polynomial> entries; // row-major, rows x cols

    const Polynomial& entry(std::size_t i, std::size_t j) const {
        return entries[i * col_degrees.size() + j];
    }
    Polynomial& entry(std::size_t i, std::size_t j) {
        return entries[i * col_degrees.size() + j];
    }

    static GradedPresentation free_module(CoeffRing R, std::uint32_t nvars,
                                          std::vector<int> row_degrees);
    /// B/(g_1..g_m): one generator in degree 0.
    static GradedPresentation cyclic_quotient(CoeffRing R, std::uint32_t nvars,
                                              const std::vector<Polynomial>& gens);
    /// Append columns y_l^t * (each generator) to the presentation.
    GradedPresentation quotient_by_powers(const std::vector<Polynomial>& ys,
                                          std::uint32_t t) const;

    void validate() const; // homogeneity of every entry
};

/// Member of a Koszul sequence over B: homogeneous of degree >= 1, or a
/// degree-0 constant of positive p-valuation (such as p itself).
struct KoszulSequenceEntry {
    Polynomial poly;
    std::uint32_t degree = 0;

    KoszulSequenceEntry() = default;
    KoszulSequenceEntry(const CoeffRing& R, Polynomial poly);

    /// Entry for the trivial (collapsed) grading, where a torsion module and
    /// the whole sequence sit in degree 0. Membership in the maximal ideal is
    /// then the responsibility of the strand source (nilpotent mult maps).
    static KoszulSequenceEntry collapsed(Polynomial poly);
};

/// The degree-d piece of a graded module, normalized to elementary-divisor
/// form together with the two bridges to the ambient coordinates of the free
/// cover: lift maps normalized generators to ambient representatives, and a
/// row of proj_rows followed by exact division by p^{proj_div} reads off a
/// normalized coordinate.
struct PresentedStrand {
    FinModule module;
    Matrix lift;                         // ambient x rank
    Matrix proj_rows;                    // rank x ambient
    std::vector<std::uint32_t> proj_div; // per-row divisor exponents
    std::size_t ambient = 0;
};

/// Per-degree view of a graded module over B.
class GradedModuleStrands {
public:
    GradedModuleStrands(CoeffRing R, std::uint32_t nvars);
    virtual ~GradedModuleStrands() = default;

    /// Populate the strand cache for [lo, hi]; afterwards at() and
    /// mult_morphism() are safe to call concurrently.
    void prepare(int lo, int hi, Exec exec);
    const PresentedStrand& at(int d) const;

    /// Multiplication by a sequence entry as a map of normalized strands.
    FinMorphism mult_morphism(const KoszulSequenceEntry& y, int src_degree) const;

    const CoeffRing& ring() const { return R_; }
    std::uint32_t nvars() const { return nvars_; }

protected:
    virtual PresentedStrand compute(int d) const = 0;
    /// Free-cover-level multiplication matrix in ambient coordinates.
    virtual Matrix ambient_mult(const Polynomial& y, std::uint32_t ydeg, int src_degree) const = 0;

    const std::vector<Monomial>& monos(int d) const;
    std::size_t mono_index(int d, const Monomial& m) const;

    CoeffRing R_;
    std::uint32_t nvars_ = 0;

private:
    struct MonoTable {
        std::vector<Monomial> list;
        std::map<Monomial, std::size_t> index;
    };
    const MonoTable& mono_table(int d) const;

    mutable std::map<int, PresentedStrand> cache_;
    mutable std::map<int, MonoTable> mono_tables_;
    mutable std::mutex mono_mutex_;
};

/// Strands of the cokernel of a homogeneous presentation matrix.
class CokerStrands : public GradedModuleStrands {
public:
    explicit CokerStrands(GradedPresentation pres);
    const GradedPresentation& presentation() const { return pres_; }
    int min_degree() const;

protected:
    PresentedStrand compute(int d) const override;
    Matrix ambient_mult(const Polynomial& y, std::uint32_t ydeg, int src_degree) const override;

private:
    GradedPresentation pres_;
};

/// Strands of a submodule J of B given by homogeneous generators; the strand
/// is the image subgroup of B_d, no syzygies required.
class ImageStrands : public GradedModuleStrands {
public:
    ImageStrands(CoeffRing R, std::uint32_t nvars, std::vector<Polynomial> gens);

protected:
    PresentedStrand compute(int d) const override;
    Matrix ambient_mult(const Polynomial& y, std::uint32_t ydeg, int src_degree) const override;

private:
    std::vector<Polynomial> gens_;
    std::vector<std::uint32_t> gen_degrees_;
};

/// Degreewise homology-length table of K(y, M) for degrees in
/// [degree_min, degree_bound]; totals are per homology index. The stabilized
/// flag means every homology strand vanished on the last `window` degrees;
/// totals must not be treated as final without it.
struct StrandReport {
    int degree_min = 0;
    int degree_bound = 0;
    std::uint32_t window = 0;
    std::size_t n = 0; // sequence length
    std::vector<std::vector<std::uint64_t>> homology; // [d - degree_min][i]
    std::vector<std::vector<std::uint64_t>> terms;    // lambda((K_i)_d), same shape
    std::vector<std::uint64_t> totals;                // per i
    std::vector<std::int64_t> chi;                    // from totals
    bool stabilized = false;

    std::uint64_t homology_at(int d, std::size_t i) const {
        return homology[static_cast<std::size_t>(d - degree_min)][i];
    }
};

/// Default degree bound and window from the shapes of the inputs.
std::uint32_t default_window(const std::vector<KoszulSequenceEntry>& y);
int default_degree_bound(const GradedPresentation& pres,
                         const std::vector<KoszulSequenceEntry>& y);

/// Degree-d component of the presented module.
FinModule strand(const GradedPresentation& pres, int d);

StrandReport koszul_strand_profile(const GradedPresentation& pres,
                                   const std::vector<KoszulSequenceEntry>& y, int degree_bound,
                                   Exec exec = Exec::parallel);
StrandReport koszul_strand_profile(GradedModuleStrands& src,
                                   const std::vector<KoszulSequenceEntry>& y, int degree_min,
                                   int degree_bound, Exec exec = Exec::parallel);

/// Exact values lambda(M/(y_1^t..y_n^t)M) for t = 1..t_max plus the fitted
/// leading coefficient lambda(t_max)/t_max^n as an exact reduced fraction.
struct LechTable {
    struct Row {
        std::uint32_t t;
        std::uint64_t lambda;
    };
    std::vector<Row> rows;
    std::uint64_t leading_num = 0;
    std::uint64_t leading_den = 1;
    bool scaling_exact = false; // lambda(t) == t^n * lambda(1) for all rows
};

LechTable lech_multiplicity_table(const GradedPresentation& pres,
                                  const std::vector<KoszulSequenceEntry>& y, std::uint32_t t_max,
                                  int degree_budget = -1, Exec exec = Exec::parallel);

/// True iff the strands of M/(y)M provably vanish: combinatorial cofiniteness
/// for all-monomial data, otherwise a vanishing strand past the generator
/// degrees below the bound.
bool validate_multiplicity_system(const GradedPresentation& pres,
                                  const std::vector<KoszulSequenceEntry>& y, int degree_bound = -1,
                                  Exec exec = Exec::parallel);

/// Dimension-shift comparison for M = B/J against U = J: per-degree equality
/// lambda(H_i(y, B/J))_d = lambda(H_{i-1}(y, J))_d for i >= 2, plus the
/// chi_j = chi_{j-1} consequence once both reports stabilize.
struct ShiftVerdict {
    bool pass = false;
    bool inconclusive = false;
    StrandReport quotient_report; // B/J
    StrandReport submodule_report; // J
    std::vector<std::string> mismatches;
};

ShiftVerdict shift_check(const std::vector<Polynomial>& ideal_gens,
                         const std::vector<KoszulSequenceEntry>& y, const CoeffRing& R,
                         std::uint32_t nvars, int degree_bound = -1,
                         Exec exec = Exec::parallel);

} // namespace kpk
