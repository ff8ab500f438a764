#include "koszulpk/lab.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_set>

namespace kpk {

std::string shape_name(InstanceShape s) {
    switch (s) {
    case InstanceShape::elementary_poly: return "elementary-poly";
    case InstanceShape::p_monomial: return "p-monomial";
    default: return "mixed";
    }
}

namespace {

// Pure unit powers X_i^{c_i} define the enumeration box; cofiniteness
// requires one for every variable.
std::vector<std::uint32_t> unit_power_box(const PMonomialIdeal& J) {
    std::vector<std::uint32_t> box(J.nvars, 0);
    for (const PMonomialGen& g : J.gens) {
        if (g.pexp != 0) continue;
        std::uint32_t support = 0, var = 0;
        for (std::uint32_t v = 0; v < J.nvars; ++v)
            if (g.mono[v] > 0) {
                ++support;
                var = v;
            }
        if (support == 0) { // unit constant: the whole ring dies
            std::fill(box.begin(), box.end(), 0);
            return box;
        }
        if (support == 1 && (box[var] == 0 || g.mono[var] < box[var])) box[var] = g.mono[var];
    }
    for (std::uint32_t v = 0; v < J.nvars; ++v)
        if (box[v] == 0)
            throw NotCofinite("variable " + std::to_string(v + 1) +
                              " has no pure power with unit coefficient");
    return box;
}

bool divides(const std::vector<std::uint32_t>& beta, const std::vector<std::uint32_t>& alpha) {
    for (std::size_t v = 0; v < beta.size(); ++v)
        if (beta[v] > alpha[v]) return false;
    return true;
}

std::uint32_t monomial_exponent(const PMonomialIdeal& J, const CoeffRing& R,
                                const std::vector<std::uint32_t>& alpha) {
    std::uint32_t m = R.k;
    for (const PMonomialGen& g : J.gens)
        if (divides(g.mono, alpha)) m = std::min(m, g.pexp);
    return m;
}

template <typename Fn>
void walk_box(const std::vector<std::uint32_t>& box, Fn&& fn) {
    std::vector<std::uint32_t> alpha(box.size(), 0);
    while (true) {
        fn(alpha);
        std::size_t v = 0;
        while (v < box.size()) {
            if (++alpha[v] < box[v]) break;
            alpha[v] = 0;
            ++v;
        }
        if (v == box.size()) break;
        if (box.empty()) break;
    }
}

} // namespace

std::uint64_t combinatorial_length(const PMonomialIdeal& J, const CoeffRing& R) {
    for (const PMonomialGen& g : J.gens)
        if (g.mono.size() != J.nvars) throw ShapeMismatch("generator arity != nvars");
    std::vector<std::uint32_t> box = unit_power_box(J);
    if (std::any_of(box.begin(), box.end(), [](std::uint32_t c) { return c == 0; })) return 0;
    std::uint64_t len = 0;
    walk_box(box, [&](const std::vector<std::uint32_t>& alpha) {
        len += monomial_exponent(J, R, alpha);
    });
    return len;
}

ActionSystem monomial_quotient_system(const PMonomialIdeal& J, const CoeffRing& R) {
    std::vector<std::uint32_t> box = unit_power_box(J);
    bool dead = std::any_of(box.begin(), box.end(), [](std::uint32_t c) { return c == 0; });

    // surviving monomials and their cyclic orders
    std::vector<std::vector<std::uint32_t>> basis;
    std::vector<std::uint32_t> exps;
    if (!dead && J.nvars > 0) {
        walk_box(box, [&](const std::vector<std::uint32_t>& alpha) {
            std::uint32_t m = monomial_exponent(J, R, alpha);
            if (m > 0) {
                basis.push_back(alpha);
                exps.push_back(m);
            }
        });
    } else if (!dead && J.nvars == 0) {
        throw Error("monomial_quotient_system: need at least one variable");
    }

    auto find_basis = [&](const std::vector<std::uint32_t>& alpha) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i] == alpha) return static_cast<std::ptrdiff_t>(i);
        return -1;
    };

    FinModule m(R, exps);
    std::vector<Matrix> acts;
    for (std::uint32_t v = 0; v < J.nvars; ++v) {
        Matrix a(R, m.rank(), m.rank());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            std::vector<std::uint32_t> up = basis[j];
            ++up[v];
            std::ptrdiff_t i = find_basis(up);
            if (i >= 0) a.at(static_cast<std::size_t>(i), j) = 1;
        }
        acts.push_back(std::move(a));
    }
    return ActionSystem(std::move(m), std::move(acts));
}

InstanceStream::InstanceStream(GeneratorSpec spec) : spec_(spec), rng_(spec.seed) {}

namespace {

std::uint32_t draw_prime(SplitMix64& rng, std::uint32_t lo, std::uint32_t hi) {
    static const std::uint32_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    std::vector<std::uint32_t> pool;
    for (std::uint32_t q : primes)
        if (q >= lo && q <= hi) pool.push_back(q);
    if (pool.empty()) throw Error("generator: no primes in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    return pool[rng.below(pool.size())];
}

} // namespace

GeneratedInstance InstanceStream::next() {
    SplitMix64 rng = rng_.split(); // per-instance stream, order-independent state
    std::uint32_t p = spec_.p_max > spec_.p ? draw_prime(rng, spec_.p, spec_.p_max) : spec_.p;
    std::uint32_t k = spec_.k_max > spec_.k
                          ? spec_.k + static_cast<std::uint32_t>(
                                          rng.below(spec_.k_max - spec_.k + 1))
                          : spec_.k;
    // clamp the drawn exponent so p^k stays at desk scale
    std::uint32_t k_cap = 0;
    for (std::uint64_t q = 1; q * p <= (1ull << 31); q *= p) ++k_cap;
    k = std::max(1u, std::min(k, k_cap));
    const CoeffRing R(p, k);
    const std::uint32_t n = spec_.n_max > spec_.n
                                ? spec_.n + static_cast<std::uint32_t>(
                                                rng.below(spec_.n_max - spec_.n + 1))
                                : spec_.n;

    InstanceShape shape = spec_.shape;
    if (shape == InstanceShape::mixed)
        shape = (idx_ % 2 == 0) ? InstanceShape::elementary_poly : InstanceShape::p_monomial;

    GeneratedInstance out = [&]() -> GeneratedInstance {
        if (shape == InstanceShape::p_monomial) {
            PMonomialIdeal J;
            J.nvars = n;
            // box with k * prod(c_i) <= max_length when possible
            std::vector<std::uint32_t> box(n, 1);
            std::uint64_t lambda_box = R.k;
            if (spec_.max_length == 0) {
                J.gens.push_back({0, std::vector<std::uint32_t>(n, 0)}); // unit kills all
            } else {
                for (int tries = 0; tries < 12; ++tries) {
                    std::uint32_t v = static_cast<std::uint32_t>(rng.below(n));
                    std::uint64_t grown = lambda_box / box[v] * (box[v] + 1);
                    if (grown <= spec_.max_length) {
                        ++box[v];
                        lambda_box = grown;
                    }
                }
                if (lambda_box > spec_.max_length) {
                    // k alone exceeds the budget: cap orders with a constant
                    J.gens.push_back(
                        {static_cast<std::uint32_t>(spec_.max_length), std::vector<std::uint32_t>(n, 0)});
                }
            }
            for (std::uint32_t v = 0; v < n; ++v) {
                std::vector<std::uint32_t> mono(n, 0);
                mono[v] = box[v];
                J.gens.push_back({0, mono});
            }
            // a few interior generators p^a X^beta
            std::uint64_t extras = rng.below(3);
            for (std::uint64_t e = 0; e < extras; ++e) {
                std::vector<std::uint32_t> mono(n, 0);
                std::uint32_t total = 0;
                for (std::uint32_t v = 0; v < n; ++v) {
                    mono[v] = static_cast<std::uint32_t>(rng.below(box[v] + 1));
                    total += mono[v];
                }
                std::uint32_t a = static_cast<std::uint32_t>(rng.below(R.k));
                if (total == 0 && a == 0) continue;
                J.gens.push_back({a, mono});
            }
            return {monomial_quotient_system(J, R), shape_name(shape), idx_};
        }

        // elementary-divisor module, actions = polynomials in one nilpotent
        // seed matrix, conjugated by a random automorphism
        std::vector<std::uint32_t> exps;
        std::uint64_t budget = spec_.max_length ? rng.below(spec_.max_length + 1) : 0;
        while (budget > 0) {
            std::uint32_t e = 1 + static_cast<std::uint32_t>(
                                      rng.below(std::min<std::uint64_t>(R.k, budget)));
            exps.push_back(e);
            budget -= e;
        }
        FinModule m(R, exps);
        const std::size_t s = m.rank();

        Matrix seed(R, s, s);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < i; ++j) {
                std::uint32_t need = m.exps[i] > m.exps[j] ? m.exps[i] - m.exps[j] : 0;
                seed.at(i, j) = R.mul(R.ppow_mod(need), static_cast<std::uint32_t>(rng.below(R.q)));
            }

        // automorphism u (and its inverse) as a product of congruence-valid
        // transvections and unit scalings
        Matrix u = Matrix::identity(R, s);
        Matrix uinv = Matrix::identity(R, s);
        for (std::size_t step = 0; step < 2 * s; ++step) {
            if (s < 2) break;
            std::size_t i = rng.below(s), j = rng.below(s);
            if (i == j) {
                std::uint32_t c;
                do { c = static_cast<std::uint32_t>(rng.below(R.q)); } while (!R.is_unit(c));
                std::uint32_t cinv = R.inv_unit(c);
                for (std::size_t col = 0; col < s; ++col) u.at(i, col) = R.mul(c, u.at(i, col));
                for (std::size_t row = 0; row < s; ++row)
                    uinv.at(row, i) = R.mul(cinv, uinv.at(row, i));
                continue;
            }
            std::uint32_t need = m.exps[i] > m.exps[j] ? m.exps[i] - m.exps[j] : 0;
            std::uint32_t f = R.mul(R.ppow_mod(need), static_cast<std::uint32_t>(rng.below(R.q)));
            for (std::size_t col = 0; col < s; ++col)
                u.at(i, col) = R.add(u.at(i, col), R.mul(f, u.at(j, col)));
            for (std::size_t row = 0; row < s; ++row)
                uinv.at(row, j) = R.sub(uinv.at(row, j), R.mul(f, uinv.at(row, i)));
        }

        std::vector<Matrix> acts;
        for (std::uint32_t t = 0; t < n; ++t) {
            Matrix acc(R, s, s);
            Matrix power = seed;
            for (int d = 1; d <= 3; ++d) {
                acc = mat_add(acc, mat_scaled(static_cast<std::uint32_t>(rng.below(R.q)), power));
                if (d < 3) power = mat_mul(power, seed);
            }
            acts.push_back(mat_mul(mat_mul(u, acc), uinv));
        }
        return {ActionSystem(std::move(m), std::move(acts)), shape_name(shape), idx_};
    }();

    ++idx_;
    return out;
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint32_t x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

std::vector<std::vector<std::uint32_t>> oracle_subsets(std::size_t n, std::size_t i) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
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

std::uint32_t log_p_exact(std::uint64_t count, std::uint32_t p) {
    std::uint32_t l = 0;
    while (count > 1) {
        if (count % p != 0) throw Error("oracle: subgroup order is not a p-power");
        count /= p;
        ++l;
    }
    return l;
}

} // namespace

OracleResult oracle_homology(const ActionSystem& sys, OracleOptions opts) {
    const FinModule& M = sys.module;
    const CoeffRing& R = M.R;
    const std::size_t n = sys.n();
    const std::size_t s = M.rank();

    // |M| <= bound, computed without overflow
    std::uint64_t size = 1;
    for (std::uint32_t e : M.exps)
        for (std::uint32_t t = 0; t < e; ++t) {
            size *= R.p;
            if (size > opts.max_module_size)
                throw SizeBoundExceeded("oracle: |M| exceeds " +
                                        std::to_string(opts.max_module_size));
        }

    std::vector<std::uint32_t> orders(s);
    for (std::size_t i = 0; i < s; ++i) orders[i] = R.ppow(M.exps[i]);

    std::vector<std::vector<std::vector<std::uint32_t>>> levels(n + 1);
    for (std::size_t i = 0; i <= n; ++i) levels[i] = oracle_subsets(n, i);

    // image subgroup order of d_i: K_i -> K_{i-1}, i = 1..n
    std::vector<std::uint32_t> im_log(n + 2, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& src_level = levels[i];
        const auto& tgt_level = levels[i - 1];
        const std::size_t tgt_coords = tgt_level.size() * s;

        // d applied to each free generator e_S (x) e_g of K_i
        std::vector<std::vector<std::uint32_t>> gens;
        for (std::size_t si = 0; si < src_level.size(); ++si) {
            const auto& S = src_level[si];
            for (std::size_t g = 0; g < s; ++g) {
                std::vector<std::uint32_t> w(tgt_coords, 0);
                bool nonzero = false;
                for (std::size_t t = 0; t < S.size(); ++t) {
                    std::vector<std::uint32_t> T = S;
                    T.erase(T.begin() + t);
                    std::size_t ti = static_cast<std::size_t>(
                        std::lower_bound(tgt_level.begin(), tgt_level.end(), T) -
                        tgt_level.begin());
                    const Matrix& act = sys.actions[S[t]].mat;
                    for (std::size_t r = 0; r < s; ++r) {
                        std::uint32_t ord = orders[r];
                        std::uint32_t val = act.at(r, g) % ord;
                        if (t % 2 == 1) val = val ? ord - val : 0;
                        std::uint32_t& slot = w[ti * s + r];
                        slot = (slot + val) % ord;
                        if (slot) nonzero = true;
                    }
                }
                if (nonzero) gens.push_back(std::move(w));
            }
        }

        std::unordered_set<std::vector<std::uint32_t>, VecHash> closure;
        std::deque<std::vector<std::uint32_t>> queue;
        closure.insert(std::vector<std::uint32_t>(tgt_coords, 0));
        queue.push_back(std::vector<std::uint32_t>(tgt_coords, 0));
        while (!queue.empty()) {
            std::vector<std::uint32_t> cur = std::move(queue.front());
            queue.pop_front();
            for (const auto& g : gens) {
                std::vector<std::uint32_t> nx(tgt_coords);
                for (std::size_t c = 0; c < tgt_coords; ++c) {
                    std::uint32_t ord = orders[c % s];
                    std::uint32_t sum = cur[c] + g[c];
                    nx[c] = sum >= ord ? sum - ord : sum;
                }
                if (closure.insert(nx).second) {
                    if (closure.size() > opts.work_budget)
                        throw SizeBoundExceeded("oracle: image closure exceeds work budget");
                    queue.push_back(std::move(nx));
                }
            }
        }
        im_log[i] = log_p_exact(closure.size(), R.p);
    }

    OracleResult res;
    res.h.resize(n + 1);
    const std::uint64_t lam = M.length();
    for (std::size_t i = 0; i <= n; ++i) {
        std::uint64_t term = lam * levels[i].size();
        res.h[i] = term - im_log[i] - im_log[i + 1];
    }
    return res;
}

} // namespace kpk
