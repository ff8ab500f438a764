#include "koszulpk/lift.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace kpk {

namespace {

// M viewed through the graded machinery with the trivial grading: one strand
// slot holding all of M, the variables acting through the given matrices.
class TorsionStrands : public GradedModuleStrands {
public:
    explicit TorsionStrands(const ActionSystem& sys)
        : GradedModuleStrands(sys.module.R, static_cast<std::uint32_t>(sys.n())), sys_(sys) {}

protected:
    PresentedStrand compute(int d) const override {
        PresentedStrand st;
        if (d != 0) {
            st.module = FinModule(R_, {});
            st.lift = Matrix(R_, 0, 0);
            st.proj_rows = Matrix(R_, 0, 0);
            return st;
        }
        const FinModule& m = sys_.module;
        st.module = m;
        st.ambient = m.rank();
        st.lift = Matrix::identity(R_, m.rank());
        st.proj_rows = Matrix::identity(R_, m.rank());
        st.proj_div.assign(m.rank(), 0);
        return st;
    }

    Matrix ambient_mult(const Polynomial& y, std::uint32_t, int) const override {
        // entries are single variables X_v; multiplication is the action x_v
        if (y.terms.size() != 1) throw Error("torsion strands: entry is not a variable");
        const Monomial& m = y.terms.begin()->first;
        std::size_t var = nvars_;
        for (std::size_t v = 0; v < m.size(); ++v)
            if (m[v] == 1 && total_degree(m) == 1) var = v;
        if (var >= nvars_) throw Error("torsion strands: entry is not a variable");
        return sys_.actions[var].mat;
    }

private:
    const ActionSystem& sys_;
};

struct RegularityKey {
    std::uint32_t p, k, n;
    int bound;
    bool operator<(const RegularityKey& o) const {
        return std::tie(p, k, n, bound) < std::tie(o.p, o.k, o.n, o.bound);
    }
};

struct RegularityResult {
    bool regular = false;
    std::uint64_t coinvariant_length = 0;
};

// The base check depends only on (p, k, n, bound); memoized across instances.
RegularityResult base_regularity(const CoeffRing& R, std::uint32_t n, int bound, Exec exec) {
    static std::map<RegularityKey, RegularityResult> cache;
    static std::mutex mutex;
    RegularityKey key{R.p, R.k, n, bound};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    GradedPresentation b = GradedPresentation::free_module(R, n, {0});
    std::vector<KoszulSequenceEntry> y;
    for (std::uint32_t v = 0; v < n; ++v)
        y.emplace_back(R, Polynomial::variable(n, v));
    StrandReport rep = koszul_strand_profile(b, y, bound, exec);
    RegularityResult res;
    res.regular = rep.stabilized;
    for (int d = rep.degree_min; d <= rep.degree_bound && res.regular; ++d)
        for (std::size_t i = 1; i <= n; ++i)
            if (rep.homology_at(d, i) != 0) res.regular = false;
    res.coinvariant_length = rep.totals[0];
    std::lock_guard<std::mutex> lock(mutex);
    cache[key] = res;
    return res;
}

} // namespace

LiftCertificate construct_lift(const ActionSystem& sys, int degree_bound, Exec exec) {
    const CoeffRing& R = sys.module.R;
    const std::uint32_t n = static_cast<std::uint32_t>(sys.n());

    LiftCertificate cert;
    cert.ring = R;
    cert.n = n;
    cert.delta_valuation = R.k;

    // Delta = p^k annihilates M (it is 0 in Z/p^k)...
    cert.delta_annihilates =
        R.ppow_mod(R.k) == 0 &&
        is_zero_morphism(FinMorphism::scalar(sys.module, R.ppow_mod(R.k)));
    // ...and is a nonzero constant of the base, hence outside (X_1..X_n).
    cert.delta_off_axes = R.ppow(R.k) != 0;

    // (1) the variables act through exactly the given sequence
    TorsionStrands torsion(sys);
    torsion.prepare(0, 0, Exec::serial);
    cert.variables_match_actions = true;
    for (std::uint32_t v = 0; v < n; ++v) {
        FinMorphism mult = torsion.mult_morphism(
            KoszulSequenceEntry::collapsed(Polynomial::variable(n, v)), 0);
        if (!morphisms_equal(mult, sys.actions[v])) cert.variables_match_actions = false;
    }

    // (2) finite over the base: finite length over Z/p^k suffices
    cert.finite_over_base = true;

    // (3) X_1..X_n is a regular sequence and s.o.p. on B, verified strandwise
    if (degree_bound < 0) degree_bound = static_cast<int>(n) + 6;
    cert.regularity_degree_bound = degree_bound;
    RegularityResult reg = base_regularity(R, n, degree_bound, exec);
    cert.coinvariant_length = reg.coinvariant_length;
    cert.regular_sop = reg.regular && reg.coinvariant_length == R.k;
    return cert;
}

BaseChangeVerdict verify_base_change(const ActionSystem& sys, const LiftCertificate& cert,
                                     Exec exec) {
    if (cert.n != sys.n() || cert.ring != sys.module.R)
        throw ShapeMismatch("verify_base_change: certificate does not match the system");

    BaseChangeVerdict v;
    v.action_pipeline = euler_profile(sys, exec);

    TorsionStrands torsion(sys);
    std::vector<KoszulSequenceEntry> y;
    for (std::uint32_t var = 0; var < cert.n; ++var)
        y.push_back(KoszulSequenceEntry::collapsed(Polynomial::variable(cert.n, var)));
    StrandReport rep = koszul_strand_profile(torsion, y, 0, 0, exec);
    v.graded_pipeline.h = rep.totals;
    v.graded_pipeline.chi = rep.chi;

    v.pass = (v.action_pipeline == v.graded_pipeline);
    if (!v.pass) {
        std::ostringstream os;
        os << "profiles differ: action pipeline (";
        for (std::size_t i = 0; i < v.action_pipeline.h.size(); ++i)
            os << (i ? "," : "") << v.action_pipeline.h[i];
        os << ") vs graded pipeline (";
        for (std::size_t i = 0; i < v.graded_pipeline.h.size(); ++i)
            os << (i ? "," : "") << v.graded_pipeline.h[i];
        os << ")";
        v.detail = os.str();
    }
    return v;
}

} // namespace kpk
