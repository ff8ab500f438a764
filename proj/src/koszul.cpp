#include "koszulpk/koszul.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace kpk {

namespace {

std::vector<std::vector<std::uint32_t>> subsets_lex(std::size_t n, std::size_t i) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    // lexicographic order on sorted index vectors
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t from) {
        if (cur.size() == i) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = from; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::size_t subset_index(const std::vector<std::vector<std::uint32_t>>& level,
                         const std::vector<std::uint32_t>& s) {
    auto it = std::lower_bound(level.begin(), level.end(), s);
    return static_cast<std::size_t>(it - level.begin());
}

FinModule repeated(const FinModule& m, std::size_t copies) {
    std::vector<std::uint32_t> exps;
    exps.reserve(m.exps.size() * copies);
    for (std::size_t c = 0; c < copies; ++c)
        exps.insert(exps.end(), m.exps.begin(), m.exps.end());
    return FinModule(m.R, std::move(exps));
}

std::string profile_dump(const EulerProfile& p) {
    std::ostringstream os;
    os << "h = (";
    for (std::size_t i = 0; i < p.h.size(); ++i) os << (i ? "," : "") << p.h[i];
    os << "), chi = (";
    for (std::size_t i = 0; i < p.chi.size(); ++i) os << (i ? "," : "") << p.chi[i];
    os << ")";
    return os.str();
}

} // namespace

ActionSystem::ActionSystem(FinModule m, std::vector<Matrix> action_matrices) : module(std::move(m)) {
    actions.reserve(action_matrices.size());
    for (Matrix& a : action_matrices) actions.emplace_back(module, module, std::move(a));
    validate();
}

ActionSystem::ActionSystem(FinModule m, std::vector<FinMorphism> action_morphisms)
    : module(std::move(m)), actions(std::move(action_morphisms)) {
    for (const FinMorphism& a : actions)
        if (a.src != module || a.tgt != module)
            throw ShapeMismatch("ActionSystem: action is not an endomorphism of the module");
    validate();
}

ActionSystem ActionSystem::trusted(FinModule m, std::vector<FinMorphism> action_morphisms) {
    ActionSystem sys;
    sys.module = std::move(m);
    sys.actions = std::move(action_morphisms);
    return sys;
}

void ActionSystem::validate() const {
    if (actions.empty()) throw Error("ActionSystem: need n >= 1 actions");
    for (std::size_t i = 0; i < actions.size(); ++i)
        for (std::size_t j = i + 1; j < actions.size(); ++j)
            if (!morphisms_equal(compose(actions[i], actions[j]), compose(actions[j], actions[i])))
                throw ActionsDoNotCommute("x_" + std::to_string(i + 1) + " and x_" +
                                          std::to_string(j + 1));
    // Nilpotency index of any nilpotent endomorphism is at most lambda(M);
    // squaring reaches that bound in log steps.
    std::uint64_t bound = module.length();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        FinMorphism power = actions[i];
        bool nil = module.is_zero() || is_zero_morphism(power);
        for (std::uint64_t reach = 1; reach < bound && !nil; reach *= 2) {
            power = compose(power, power);
            nil = is_zero_morphism(power);
        }
        if (!nil)
            throw ActionNotInRadical("x_" + std::to_string(i + 1) +
                                     " is not nilpotent on the module");
    }
}

ActionSystem direct_sum(const ActionSystem& a, const ActionSystem& b) {
    if (a.n() != b.n()) throw ShapeMismatch("direct_sum: sequence lengths differ");
    std::vector<FinMorphism> acts;
    for (std::size_t i = 0; i < a.n(); ++i) acts.push_back(direct_sum(a.actions[i], b.actions[i]));
    return ActionSystem::trusted(direct_sum(a.module, b.module), std::move(acts));
}

KoszulRep build_koszul(const ActionSystem& sys) {
    const std::size_t n = sys.n();
    const FinModule& M = sys.module;
    const std::size_t s = M.rank();
    const CoeffRing& R = M.R;

    KoszulRep rep;
    rep.n = n;
    rep.subsets.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        rep.subsets[i] = subsets_lex(n, i);
        rep.terms.push_back(repeated(M, rep.subsets[i].size()));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& src_level = rep.subsets[i];
        const auto& tgt_level = rep.subsets[i - 1];
        Matrix d(R, tgt_level.size() * s, src_level.size() * s);
        for (std::size_t si = 0; si < src_level.size(); ++si) {
            const auto& S = src_level[si];
            for (std::size_t t = 0; t < S.size(); ++t) {
                std::vector<std::uint32_t> T = S;
                T.erase(T.begin() + t);
                std::size_t ti = subset_index(tgt_level, T);
                const Matrix& act = sys.actions[S[t]].mat;
                bool negate = (t % 2 == 1); // sign (-1)^{t-1} at the t-th smallest element
                for (std::size_t r = 0; r < s; ++r)
                    for (std::size_t c = 0; c < s; ++c) {
                        std::uint32_t v = act.at(r, c);
                        d.at(ti * s + r, si * s + c) = negate ? R.neg(v) : v;
                    }
            }
        }
        rep.diffs.emplace_back(rep.terms[i], rep.terms[i - 1], std::move(d));
    }
    for (std::size_t i = 0; i + 1 < rep.diffs.size(); ++i)
        if (!is_zero_morphism(compose(rep.diffs[i], rep.diffs[i + 1])))
            throw Error("build_koszul: d o d != 0 at level " + std::to_string(i + 2));
    return rep;
}

std::vector<std::int64_t> partial_euler_chars(const std::vector<std::uint64_t>& h) {
    std::vector<std::int64_t> chi(h.size(), 0);
    std::int64_t acc = 0;
    for (std::size_t j = h.size(); j-- > 0;) {
        acc = static_cast<std::int64_t>(h[j]) - acc;
        chi[j] = acc;
    }
    return chi;
}

EulerProfile profile_of(const KoszulRep& rep, Exec exec) {
    const std::size_t n = rep.n;
    // Homology needs one image length per differential; indices are
    // independent work units.
    std::vector<std::uint64_t> im(n + 2, 0);
    for_each_index(n, exec, [&](std::size_t i) { im[i + 1] = image_length(rep.diffs[i]); });
    EulerProfile p;
    p.h.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) p.h[i] = rep.terms[i].length() - im[i] - im[i + 1];
    p.chi = partial_euler_chars(p.h);
    return p;
}

EulerProfile euler_profile(const ActionSystem& sys, Exec exec) {
    return profile_of(build_koszul(sys), exec);
}

Verdict verify_serre(const ActionSystem& sys, Exec exec) {
    Verdict v;
    v.profile = euler_profile(sys, exec);
    for (std::size_t j = 0; j < v.profile.chi.size(); ++j) {
        Check c;
        c.name = "chi_" + std::to_string(j) + " >= 0";
        c.pass = v.profile.chi[j] >= 0;
        if (!c.pass)
            c.detail = "chi_" + std::to_string(j) + " = " + std::to_string(v.profile.chi[j]) +
                       "; " + profile_dump(v.profile);
        v.checks.push_back(std::move(c));
    }
    return v;
}

Verdict chi0_dichotomy_check(const ActionSystem& sys, Exec exec) {
    Verdict v;
    v.profile = euler_profile(sys, exec);
    std::uint64_t even = 0, odd = 0;
    for (std::size_t i = 0; i < v.profile.h.size(); ++i)
        (i % 2 == 0 ? even : odd) += v.profile.h[i];
    Check c;
    c.name = "chi_0 = 0 (dim M = 0 < n)";
    c.pass = (even == odd);
    c.detail = "sum_even = " + std::to_string(even) + ", sum_odd = " + std::to_string(odd);
    v.checks.push_back(std::move(c));
    return v;
}

Verdict boundary_identities(const ActionSystem& sys, Exec exec) {
    Verdict v;
    KoszulRep rep = build_koszul(sys);
    v.profile = profile_of(rep, exec);
    const FinModule& M = sys.module;
    const std::size_t n = sys.n();
    const FinModule zero(M.R, {});

    IsoType h0 = subquotient_iso_type(rep.diffs[0], FinMorphism::zero(rep.terms[0], zero));
    IsoType coker = quotient_iso_type(M, sys.actions);
    {
        Check c;
        c.name = "H_0 = M/(x)M";
        c.pass = (h0 == coker);
        c.detail = "H_0 = " + h0.describe(M.R.p) + " vs M/(x)M = " + coker.describe(M.R.p);
        v.checks.push_back(std::move(c));
    }

    IsoType hn = subquotient_iso_type(FinMorphism::zero(zero, rep.terms[n]), rep.diffs[n - 1]);
    IsoType socle = kernel_intersection_iso_type(M, sys.actions);
    {
        Check c;
        c.name = "H_n = (0 :_M x)";
        c.pass = (hn == socle);
        c.detail = "H_n = " + hn.describe(M.R.p) + " vs (0:x) = " + socle.describe(M.R.p);
        v.checks.push_back(std::move(c));
    }
    {
        // Commuting nilpotents share a nonzero common kernel.
        Check c;
        c.name = "H_n != 0 when M != 0";
        c.pass = M.is_zero() || v.profile.h[n] >= 1;
        c.detail = "lambda(H_n) = " + std::to_string(v.profile.h[n]);
        v.checks.push_back(std::move(c));
    }
    return v;
}

SequenceTransform SequenceTransform::permute(std::vector<std::size_t> perm) {
    SequenceTransform t;
    t.permutation = std::move(perm);
    return t;
}

SequenceTransform SequenceTransform::unimodular(Matrix u) {
    SequenceTransform t;
    t.scalar = std::move(u);
    return t;
}

ActionSystem apply_transform(const ActionSystem& sys, const SequenceTransform& t) {
    const std::size_t n = sys.n();
    std::vector<FinMorphism> acts;
    if (t.scalar.nrows == 0) {
        if (t.permutation.size() != n) throw ShapeMismatch("transform: permutation size != n");
        std::vector<bool> seen(n, false);
        for (std::size_t i : t.permutation) {
            if (i >= n || seen[i]) throw Error("transform: not a permutation");
            seen[i] = true;
        }
        for (std::size_t i = 0; i < n; ++i) acts.push_back(sys.actions[t.permutation[i]]);
        return ActionSystem::trusted(sys.module, std::move(acts));
    } else {
        const Matrix& U = t.scalar;
        if (U.nrows != n || U.ncols != n) throw ShapeMismatch("transform: U is not n x n");
        if (!is_invertible(U)) throw NotInvertible("transform matrix U");
        for (std::size_t i = 0; i < n; ++i) {
            FinMorphism acc = FinMorphism::zero(sys.module, sys.module);
            for (std::size_t j = 0; j < n; ++j)
                acc = add(acc, scaled(U.at(i, j), sys.actions[j]));
            acts.push_back(std::move(acc));
        }
    }
    // linear combinations of commuting nilpotents commute and stay nilpotent
    return ActionSystem::trusted(sys.module, std::move(acts));
}

Verdict invariance_suite(const ActionSystem& sys, const SequenceTransform& t, Exec exec) {
    Verdict v;
    v.profile = euler_profile(sys, exec);
    EulerProfile after = euler_profile(apply_transform(sys, t), exec);
    Check c;
    c.name = "profile invariant under sequence transform";
    c.pass = (after == v.profile);
    if (!c.pass)
        c.detail = "before: " + profile_dump(v.profile) + "; after: " + profile_dump(after);
    v.checks.push_back(std::move(c));
    return v;
}

} // namespace kpk
