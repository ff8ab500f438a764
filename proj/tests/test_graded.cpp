#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "koszulpk/graded.hpp"
#include "test_support.hpp"

using namespace kpk;

namespace {

Polynomial var_power(const CoeffRing& R, std::uint32_t nvars, std::uint32_t v, std::uint32_t e,
                     std::uint32_t coeff = 1) {
    Monomial m(nvars, 0);
    m[v] = e;
    return Polynomial::term(R, nvars, coeff, std::move(m));
}

std::vector<KoszulSequenceEntry> variables_sequence(const CoeffRing& R, std::uint32_t nvars,
                                                    std::uint32_t power = 1) {
    std::vector<KoszulSequenceEntry> y;
    for (std::uint32_t v = 0; v < nvars; ++v)
        y.emplace_back(R, var_power(R, nvars, v, power));
    return y;
}

} // namespace

TEST_CASE("monomials_of_degree is complete and ordered") {
    CHECK(monomials_of_degree(1, 3) == std::vector<Monomial>{{3}});
    CHECK(monomials_of_degree(2, 2).size() == 3);
    CHECK(monomials_of_degree(3, 4).size() == 15);
    auto l = monomials_of_degree(2, 2);
    CHECK(std::is_sorted(l.begin(), l.end(), std::greater<Monomial>()));
}

TEST_CASE("polynomial arithmetic and homogeneity") {
    CoeffRing R(2, 2);
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Polynomial s = poly_add(R, x, y);
    CHECK(s.homogeneous_degree() == 1);
    Polynomial sq = poly_mul(R, s, s); // (X+Y)^2 = X^2 + 2XY + Y^2 over Z/4
    CHECK(sq.terms.size() == 3);
    CHECK(sq.homogeneous_degree() == 2);
    CHECK(poly_pow(R, s, 2).terms == sq.terms);
    Polynomial mixed = poly_add(R, x, Polynomial::constant(R, 2, 1));
    CHECK_THROWS_AS(mixed.homogeneous_degree(), InhomogeneousInput);
    // 2*(X+Y) + 2*(X+Y) = 0
    CHECK(poly_add(R, poly_mul(R, Polynomial::constant(R, 2, 2), s),
                   poly_mul(R, Polynomial::constant(R, 2, 2), s))
              .is_zero());
}

TEST_CASE("sequence entry invariants") {
    CoeffRing R(2, 2);
    CHECK_NOTHROW(KoszulSequenceEntry(R, Polynomial::variable(1, 0)));
    CHECK_NOTHROW(KoszulSequenceEntry(R, Polynomial::constant(R, 1, 2))); // p
    CHECK_THROWS_AS(KoszulSequenceEntry(R, Polynomial::constant(R, 1, 1)), InhomogeneousInput);
    CHECK_THROWS_AS(KoszulSequenceEntry(R, Polynomial::constant(R, 1, 3)), InhomogeneousInput);
}

TEST_CASE("strand: frozen examples") {
    CoeffRing R(2, 2);
    SUBCASE("B = Z/4[X] at degree 2") {
        GradedPresentation b = GradedPresentation::free_module(R, 1, {0});
        CHECK(strand(b, 2).exps == std::vector<std::uint32_t>{2});
        CHECK(strand(b, -1).is_zero());
    }
    SUBCASE("B/(X^2) at degree 2 vanishes") {
        auto m = GradedPresentation::cyclic_quotient(R, 1, {var_power(R, 1, 0, 2)});
        CHECK(strand(m, 2).is_zero());
        CHECK(strand(m, 1).exps == std::vector<std::uint32_t>{2});
    }
    SUBCASE("B/(2X) at degree 1 is Z/2") {
        auto m = GradedPresentation::cyclic_quotient(R, 1, {var_power(R, 1, 0, 1, 2)});
        CHECK(strand(m, 1).exps == std::vector<std::uint32_t>{1});
        CHECK(strand(m, 0).exps == std::vector<std::uint32_t>{2});
    }
    SUBCASE("monomial counting on free modules") {
        GradedPresentation b2 = GradedPresentation::free_module(R, 3, {0});
        for (int d = 0; d <= 5; ++d)
            CHECK(strand(b2, d).rank() == monomials_of_degree(3, d).size());
    }
}

TEST_CASE("koszul_strand_profile: frozen examples") {
    CoeffRing R(2, 2);
    SUBCASE("B = Z/4[X,Y], y = (X,Y), D = 10") {
        GradedPresentation b = GradedPresentation::free_module(R, 2, {0});
        StrandReport rep = koszul_strand_profile(b, variables_sequence(R, 2), 10);
        CHECK(rep.totals == std::vector<std::uint64_t>{2, 0, 0});
        CHECK(rep.homology_at(0, 0) == 2); // concentrated in degree 0
        for (int d = 1; d <= 10; ++d) CHECK(rep.homology_at(d, 0) == 0);
        CHECK(rep.stabilized);
        CHECK(rep.chi == std::vector<std::int64_t>{2, 0, 0});
    }
    SUBCASE("B = Z/4[X], y = (X^3)") {
        GradedPresentation b = GradedPresentation::free_module(R, 1, {0});
        std::vector<KoszulSequenceEntry> y{KoszulSequenceEntry(R, var_power(R, 1, 0, 3))};
        StrandReport rep = koszul_strand_profile(b, y, -1);
        CHECK(rep.totals == std::vector<std::uint64_t>{6, 0});
        CHECK(rep.stabilized);
        CHECK(rep.chi[0] == 6);
    }
    SUBCASE("B = Z/4[X], y = (2, X): dim B = 1 < 2 forces chi_0 = 0") {
        GradedPresentation b = GradedPresentation::free_module(R, 1, {0});
        std::vector<KoszulSequenceEntry> y{KoszulSequenceEntry(R, Polynomial::constant(R, 1, 2)),
                                           KoszulSequenceEntry(R, var_power(R, 1, 0, 1))};
        StrandReport rep = koszul_strand_profile(b, y, -1);
        CHECK(rep.stabilized);
        CHECK(rep.chi[0] == 0);
        for (std::int64_t c : rep.chi) CHECK(c >= 0);
        CHECK(rep.totals == std::vector<std::uint64_t>{1, 1, 0});
    }
}

TEST_CASE("strandwise Euler consistency") {
    // per degree: sum (-1)^i lambda((K_i)_d) = sum (-1)^i lambda(H_i)_d
    CoeffRing R(3, 2);
    auto m = GradedPresentation::cyclic_quotient(
        R, 2, {var_power(R, 2, 0, 2), poly_mul(R, Polynomial::constant(R, 2, 3),
                                               var_power(R, 2, 1, 1))});
    StrandReport rep = koszul_strand_profile(m, variables_sequence(R, 2), 9);
    for (std::size_t di = 0; di < rep.homology.size(); ++di) {
        std::int64_t lhs = 0, rhs = 0;
        for (std::size_t i = 0; i <= rep.n; ++i) {
            std::int64_t sign = (i % 2 == 0) ? 1 : -1;
            lhs += sign * static_cast<std::int64_t>(rep.terms[di][i]);
            rhs += sign * static_cast<std::int64_t>(rep.homology[di][i]);
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("regular sequences: H_0 only, scaling law") {
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {2, 2}}) {
        CoeffRing R(p, k);
        for (std::uint32_t n : {1u, 2u}) {
            GradedPresentation b = GradedPresentation::free_module(R, n, std::vector<int>(1, 0));
            std::uint64_t chi0_t1 = 0;
            for (std::uint32_t t = 1; t <= 3; ++t) {
                StrandReport rep = koszul_strand_profile(b, variables_sequence(R, n, t), -1);
                REQUIRE(rep.stabilized);
                for (std::size_t i = 1; i <= n; ++i) CHECK(rep.totals[i] == 0);
                std::uint64_t tn = 1;
                for (std::uint32_t c = 0; c < n; ++c) tn *= t;
                CHECK(rep.chi[0] == static_cast<std::int64_t>(k * tn));
                if (t == 1)
                    chi0_t1 = rep.chi[0];
                else
                    CHECK(rep.chi[0] == static_cast<std::int64_t>(tn * chi0_t1));
            }
        }
    }
}

TEST_CASE("lech_multiplicity_table: frozen examples") {
    CoeffRing R(2, 2);
    SUBCASE("B = Z/4[X,Y], y = (X,Y): 2, 8, 18") {
        GradedPresentation b = GradedPresentation::free_module(R, 2, {0});
        LechTable t = lech_multiplicity_table(b, variables_sequence(R, 2), 3);
        REQUIRE(t.rows.size() == 3);
        CHECK(t.rows[0].lambda == 2);
        CHECK(t.rows[1].lambda == 8);
        CHECK(t.rows[2].lambda == 18);
        CHECK(t.scaling_exact);
        CHECK(t.leading_num == 2);
        CHECK(t.leading_den == 1);
    }
    SUBCASE("B = Z/4[X], y = (X): 2, 4, 6, 8") {
        GradedPresentation b = GradedPresentation::free_module(R, 1, {0});
        LechTable t = lech_multiplicity_table(b, variables_sequence(R, 1), 4);
        std::vector<std::uint64_t> got;
        for (auto& r : t.rows) got.push_back(r.lambda);
        CHECK(got == std::vector<std::uint64_t>{2, 4, 6, 8});
        CHECK(t.scaling_exact);
    }
    SUBCASE("finite-length module: constant table") {
        auto m = GradedPresentation::cyclic_quotient(R, 1, {var_power(R, 1, 0, 1)});
        LechTable t = lech_multiplicity_table(m, variables_sequence(R, 1), 3);
        for (auto& r : t.rows) CHECK(r.lambda == 2);
        CHECK_FALSE(t.scaling_exact);
    }
    SUBCASE("non-finite quotient exceeds the degree budget") {
        GradedPresentation b = GradedPresentation::free_module(R, 2, {0});
        std::vector<KoszulSequenceEntry> y{KoszulSequenceEntry(R, var_power(R, 2, 0, 1))};
        CHECK_THROWS_AS(lech_multiplicity_table(b, y, 2), DegreeBudgetExceeded);
    }
}

TEST_CASE("validate_multiplicity_system") {
    CoeffRing R(2, 2);
    GradedPresentation b2 = GradedPresentation::free_module(R, 2, {0});
    CHECK(validate_multiplicity_system(b2, variables_sequence(R, 2)));
    std::vector<KoszulSequenceEntry> just_x{KoszulSequenceEntry(R, var_power(R, 2, 0, 1))};
    CHECK_FALSE(validate_multiplicity_system(b2, just_x));
    auto m = GradedPresentation::cyclic_quotient(R, 1, {var_power(R, 1, 0, 2)});
    std::vector<KoszulSequenceEntry> x1{KoszulSequenceEntry(R, var_power(R, 1, 0, 1))};
    CHECK(validate_multiplicity_system(m, x1));
    // non-monomial data goes through the strand scan
    std::vector<Polynomial> gens{poly_add(R, var_power(R, 2, 0, 1), var_power(R, 2, 1, 1))};
    auto diag = GradedPresentation::cyclic_quotient(R, 2, gens);
    CHECK(validate_multiplicity_system(diag, variables_sequence(R, 2)));
}

TEST_CASE("shift_check: frozen examples") {
    CoeffRing R(2, 2);
    SUBCASE("J = (X^2) in Z/4[X,Y]: J is free, both sides vanish") {
        ShiftVerdict v = shift_check({var_power(R, 2, 0, 2)}, variables_sequence(R, 2), R, 2);
        CHECK(v.pass);
        CHECK_FALSE(v.inconclusive);
        for (int d = 0; d <= v.quotient_report.degree_bound; ++d) {
            CHECK(v.quotient_report.homology_at(d, 2) == 0);
            CHECK(v.submodule_report.homology_at(d, 1) == 0);
        }
    }
    SUBCASE("J = (2X, 2Y) in Z/4[X,Y]: equal nonzero strands at i = 2") {
        std::vector<Polynomial> gens{var_power(R, 2, 0, 1, 2), var_power(R, 2, 1, 1, 2)};
        ShiftVerdict v = shift_check(gens, variables_sequence(R, 2), R, 2);
        CHECK(v.pass);
        CHECK_FALSE(v.inconclusive);
        // both sides are one copy of Z/2 concentrated in degree 2
        CHECK(v.quotient_report.homology_at(2, 2) == 1);
        CHECK(v.submodule_report.homology_at(2, 1) == 1);
        CHECK(v.quotient_report.chi[2] == v.submodule_report.chi[1]);
    }
    SUBCASE("J = 0: trivial pass") {
        ShiftVerdict v = shift_check({}, variables_sequence(R, 2), R, 2);
        CHECK(v.pass);
        for (int d = 0; d <= v.submodule_report.degree_bound; ++d)
            for (std::size_t i = 0; i <= 2; ++i)
                CHECK(v.submodule_report.homology_at(d, i) == 0);
    }
    SUBCASE("tiny degree bound comes back inconclusive") {
        // H_0(B/J) has strands out to degree 2; a bound of 1 cannot stabilize
        ShiftVerdict v = shift_check({var_power(R, 2, 0, 2)}, variables_sequence(R, 2), R, 2, 1);
        CHECK(v.inconclusive);
    }
    SUBCASE("non-regular y is rejected") {
        std::vector<KoszulSequenceEntry> y{KoszulSequenceEntry(R, Polynomial::constant(R, 2, 2)),
                                           KoszulSequenceEntry(R, Polynomial::constant(R, 2, 2))};
        CHECK_THROWS_AS(shift_check({var_power(R, 2, 0, 2)}, y, R, 2), Error);
    }
}

TEST_CASE("serial and parallel strand profiles agree") {
    CoeffRing R(3, 2);
    auto m = GradedPresentation::cyclic_quotient(
        R, 2, {var_power(R, 2, 0, 2), var_power(R, 2, 1, 3, 3)});
    StrandReport a = koszul_strand_profile(m, variables_sequence(R, 2), 8, Exec::serial);
    StrandReport b = koszul_strand_profile(m, variables_sequence(R, 2), 8, Exec::parallel);
    CHECK(a.homology == b.homology);
    CHECK(a.terms == b.terms);
    CHECK(a.totals == b.totals);
    CHECK(a.stabilized == b.stabilized);
}

TEST_CASE("negative generator degrees are supported") {
    CoeffRing R(2, 2);
    GradedPresentation b = GradedPresentation::free_module(R, 2, {-1});
    // B(1): degree d strand has the monomials of degree d + 1
    CHECK(strand(b, -1).rank() == 1);
    CHECK(strand(b, 0).rank() == 2);
    CHECK(strand(b, 2).rank() == 4);
    std::vector<KoszulSequenceEntry> y{KoszulSequenceEntry(R, Polynomial::variable(2, 0)),
                                       KoszulSequenceEntry(R, Polynomial::variable(2, 1))};
    CokerStrands src(b);
    StrandReport rep = koszul_strand_profile(src, y, -1, 8, Exec::parallel);
    CHECK(rep.stabilized);
    CHECK(rep.totals == std::vector<std::uint64_t>{2, 0, 0}); // B(1)/(X,Y) in degree -1
    CHECK(rep.homology_at(-1, 0) == 2);
}

TEST_CASE("inhomogeneous presentations are rejected") {
    CoeffRing R(2, 2);
    GradedPresentation p;
    p.R = R;
    p.nvars = 1;
    p.row_degrees = {0};
    p.col_degrees = {2};
    p.entries = {var_power(R, 1, 0, 1)}; // degree 1 entry where 2 is required
    CHECK_THROWS_AS(strand(p, 1), InhomogeneousInput);
}
