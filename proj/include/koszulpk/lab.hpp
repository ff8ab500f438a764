#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "koszul.hpp"

namespace kpk {

/// Deterministic splittable generator; the algorithm name is recorded in
/// reports next to the seed.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    SplitMix64 split() { return SplitMix64(next() ^ 0x5851f42d4c957f2dull); }
};

inline constexpr const char* kPrngName = "splitmix64";

enum class InstanceShape { elementary_poly, p_monomial, mixed };

std::string shape_name(InstanceShape s);

/// Ranged parameters: each instance draws p from the primes in [p, p_max],
/// k from [k, k_max] (clamped to the desk-scale bound) and n from [n, n_max].
/// A zero upper bound pins the parameter to its lower value.
struct GeneratorSpec {
    std::uint64_t seed = 1;
    std::uint32_t p = 2;
    std::uint32_t k = 2;
    std::uint32_t n = 1;
    std::uint32_t p_max = 0;
    std::uint32_t k_max = 0;
    std::uint32_t n_max = 0;
    std::uint64_t max_length = 16;
    InstanceShape shape = InstanceShape::mixed;
};

/// One generator p^pexp * X^mono of a p-monomial ideal.
struct PMonomialGen {
    std::uint32_t pexp = 0;
    std::vector<std::uint32_t> mono;
};

struct PMonomialIdeal {
    std::uint32_t nvars = 0;
    std::vector<PMonomialGen> gens;
};

/// Closed-form length of Z/p^k[X]/J for cofinite J: each monomial in the box
/// under the pure unit powers contributes min(k, min pexp over dividing
/// generators). Throws NotCofinite when some variable has no pure power with
/// unit coefficient.
std::uint64_t combinatorial_length(const PMonomialIdeal& J, const CoeffRing& R);

/// The quotient as a finite module with multiplication-by-variable actions.
ActionSystem monomial_quotient_system(const PMonomialIdeal& J, const CoeffRing& R);

struct GeneratedInstance {
    ActionSystem sys;
    std::string shape;
    std::uint64_t index = 0;
};

/// Reproducible stream: the same spec yields the same instances in the same
/// order. Commutativity holds by construction (polynomials in one nilpotent
/// seed matrix, or multiplication operators on a monomial quotient).
class InstanceStream {
public:
    explicit InstanceStream(GeneratorSpec spec);
    GeneratedInstance next();
    const GeneratorSpec& spec() const { return spec_; }

private:
    GeneratorSpec spec_;
    SplitMix64 rng_;
    std::uint64_t idx_ = 0;
};

struct OracleOptions {
    std::uint64_t max_module_size = 4096; // bound on |M|
    std::uint64_t work_budget = 1ull << 22; // bound on enumerated subgroup sizes
};

struct OracleResult {
    std::vector<std::uint64_t> h; // lambda(H_0..H_n) by exhaustive enumeration
};

/// Independent check of the SNF pipeline: images of the differentials are
/// enumerated as explicit subgroups, kernels counted via |ker| = |K_i|/|im|.
OracleResult oracle_homology(const ActionSystem& sys, OracleOptions opts = {});

} // namespace kpk
