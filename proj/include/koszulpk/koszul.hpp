#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "finmodule.hpp"
#include "parallel.hpp"

namespace kpk {

/// A finite-length module together with n pairwise commuting nilpotent
/// endomorphisms. Nilpotency encodes membership of the sequence in the
/// maximal ideal; invertible actions are rejected rather than silently
/// producing zero homology.
struct ActionSystem {
    FinModule module;
    std::vector<FinMorphism> actions;

    ActionSystem(FinModule m, std::vector<Matrix> action_matrices);
    ActionSystem(FinModule m, std::vector<FinMorphism> action_morphisms);

    std::size_t n() const { return actions.size(); }

    /// Construction without re-validation, for systems derived from already
    /// validated ones (sequence transforms, direct sums). Invariants are the
    /// caller's responsibility.
    static ActionSystem trusted(FinModule m, std::vector<FinMorphism> action_morphisms);

private:
    ActionSystem() = default;
    void validate() const;
};

ActionSystem direct_sum(const ActionSystem& a, const ActionSystem& b);

/// The full Koszul complex K(x, M): terms[i] = M^{C(n,i)} indexed by the
/// i-element subsets of {1..n} in lexicographic order; diffs[i] is
/// d_{i+1}: terms[i+1] -> terms[i]. Sign convention: for S = {s_1<...<s_i},
/// d(e_S (x) m) = sum_t (-1)^{t-1} e_{S\{s_t}} (x) x_{s_t}(m).
struct KoszulRep {
    std::size_t n = 0;
    std::vector<FinModule> terms;              // size n+1
    std::vector<FinMorphism> diffs;            // size n
    std::vector<std::vector<std::vector<std::uint32_t>>> subsets; // per level, lex order
};

/// Builds K(x, M) and verifies d o d = 0.
KoszulRep build_koszul(const ActionSystem& sys);

/// Homology lengths and all partial Euler characteristics.
struct EulerProfile {
    std::vector<std::uint64_t> h;   // lambda(H_0..H_n)
    std::vector<std::int64_t> chi;  // chi_0..chi_n

    bool operator==(const EulerProfile& o) const { return h == o.h && chi == o.chi; }
};

/// chi_j = sum_{i>=j} (-1)^{i-j} h_i, computed by the backward recursion
/// chi_n = h_n, chi_j = h_j - chi_{j+1}.
std::vector<std::int64_t> partial_euler_chars(const std::vector<std::uint64_t>& h);

EulerProfile euler_profile(const ActionSystem& sys, Exec exec = Exec::parallel);
EulerProfile profile_of(const KoszulRep& rep, Exec exec = Exec::parallel);

/// One named check with an explanation when it fails.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Verdict {
    std::vector<Check> checks;
    EulerProfile profile;

    bool pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Non-negativity of every chi_j. A failure here indicates an implementation
/// bug, so the verdict carries the full profile for reproduction.
Verdict verify_serre(const ActionSystem& sys, Exec exec = Exec::parallel);

/// For finite-length M with n >= 1 the multiplicity dichotomy resolves to
/// chi_0 = 0: the even and odd homology length sums must agree exactly.
Verdict chi0_dichotomy_check(const ActionSystem& sys, Exec exec = Exec::parallel);

/// H_0 = M/(x)M and H_n = (0 :_M (x)) as isomorphism types, plus H_n != 0
/// whenever M != 0.
Verdict boundary_identities(const ActionSystem& sys, Exec exec = Exec::parallel);

/// Either a permutation of the sequence or an invertible scalar change of
/// basis x'_i = sum_j U[i][j] x_j.
struct SequenceTransform {
    std::vector<std::size_t> permutation; // used when `scalar` is empty
    Matrix scalar;                        // n x n over the coefficient ring

    static SequenceTransform permute(std::vector<std::size_t> perm);
    static SequenceTransform unimodular(Matrix u);
};

ActionSystem apply_transform(const ActionSystem& sys, const SequenceTransform& t);

/// Recomputes the profile for the transformed sequence and asserts every
/// homology length (hence every chi_j) is unchanged.
Verdict invariance_suite(const ActionSystem& sys, const SequenceTransform& t,
                         Exec exec = Exec::parallel);

} // namespace kpk
