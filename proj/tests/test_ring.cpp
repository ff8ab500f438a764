#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "koszulpk/ring.hpp"
#include "test_support.hpp"

using namespace kpk;

TEST_CASE("ring construction enforces desk-scale bounds") {
    CHECK_NOTHROW(CoeffRing(2, 31));
    CHECK_THROWS_AS(CoeffRing(2, 32), Error);
    CHECK_THROWS_AS(CoeffRing(4, 1), Error);
    CHECK_THROWS_AS(CoeffRing(1, 1), Error);
    CHECK_THROWS_AS(CoeffRing(2, 0), Error);
    CHECK(CoeffRing(3, 3).q == 27);
}

TEST_CASE("valuation") {
    CoeffRing r22(2, 2);
    CHECK(Scalar(2, r22).valuation() == 1);
    CHECK(Scalar(0, r22).valuation() == 2);
    CoeffRing r33(3, 3);
    CHECK(Scalar(18, r33).valuation() == 2);
    CHECK(Scalar(1, r33).valuation() == 0);
}

TEST_CASE("invert_unit") {
    CoeffRing r22(2, 2);
    CHECK(Scalar(3, r22).inverse().value == 3);
    CoeffRing r51(5, 1);
    CHECK(Scalar(2, r51).inverse().value == 3);
    CHECK_THROWS_AS(Scalar(2, r22).inverse(), NotAUnit);
}

TEST_CASE("invert_unit exhaustive for small rings") {
    // every unit s has s * inv(s) = 1, for all p^k <= 625
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 9},
                        {3, 5}, {5, 4}, {7, 3}, {11, 2}, {13, 2}, {23, 2},
                        {617, 1}}) {
        CoeffRing R(p, k);
        REQUIRE(R.q <= 625);
        for (std::uint32_t s = 0; s < R.q; ++s) {
            if (!R.is_unit(s)) continue;
            CHECK(R.mul(s, R.inv_unit(s)) == 1);
        }
    }
}

TEST_CASE("modular arithmetic against a plain reference") {
    test::Rng rng(17);
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 31}, {3, 19},
                        {46337, 1}, {5, 13}}) {
        CoeffRing R(p, k);
        for (int t = 0; t < 2000; ++t) {
            std::uint64_t a = rng.below(R.q), b = rng.below(R.q);
            CHECK(R.mul(a, b) == (a * b) % R.q);
            CHECK(R.add(a, b) == (a + b) % R.q);
            CHECK(R.sub(a, b) == (a + R.q - b) % R.q);
        }
    }
}

TEST_CASE("smith normal form: frozen examples") {
    CoeffRing R(2, 2);
    SUBCASE("[[2,1],[0,2]] over Z/4") {
        Matrix A(R, 2, 2);
        A.at(0, 0) = 2; A.at(0, 1) = 1;
        A.at(1, 0) = 0; A.at(1, 1) = 2;
        auto snf = smith_normal_form(A);
        CHECK(snf.exponents == std::vector<std::uint32_t>{0, 2});
        CHECK(mat_mul(mat_mul(snf.U, A), snf.V) == snf.diagonal_matrix(R, 2, 2));
    }
    SUBCASE("identity(3)") {
        Matrix I = Matrix::identity(R, 3);
        CHECK(snf_exponents(I) == std::vector<std::uint32_t>{0, 0, 0});
    }
    SUBCASE("zero 2x3") {
        Matrix Z(R, 2, 3);
        CHECK(snf_exponents(Z) == std::vector<std::uint32_t>{2, 2});
    }
    SUBCASE("empty matrices") {
        CHECK(snf_exponents(Matrix(R, 0, 5)).empty());
        CHECK(snf_exponents(Matrix(R, 5, 0)).empty());
        CHECK(image_length(Matrix(R, 0, 5)) == 0);
        CHECK(image_length(Matrix(R, 5, 0)) == 0);
    }
}

TEST_CASE("image_length: frozen examples") {
    CoeffRing R(2, 2);
    Matrix A(R, 1, 1);
    A.at(0, 0) = 2;
    CHECK(image_length(A) == 1);
    A.at(0, 0) = 1;
    CHECK(image_length(A) == 2);
    Matrix B(R, 2, 2);
    B.at(0, 0) = 2; B.at(0, 1) = 1;
    B.at(1, 0) = 0; B.at(1, 1) = 2;
    CHECK(image_length(B) == 2);
}

TEST_CASE("SNF reconstruction and transform invertibility on random matrices") {
    test::Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        CoeffRing R = test::random_ring(rng);
        std::size_t m = rng.below(6), n = rng.below(6);
        Matrix A = test::random_matrix(rng, R, m, n);
        auto snf = smith_normal_form(A);
        // exact reconstruction
        CHECK(mat_mul(mat_mul(snf.U, A), snf.V) == snf.diagonal_matrix(R, m, n));
        // exponents nondecreasing
        for (std::size_t i = 0; i + 1 < snf.exponents.size(); ++i)
            CHECK(snf.exponents[i] <= snf.exponents[i + 1]);
        // transforms are two-sided inverses
        CHECK(mat_mul(snf.U, snf.Uinv) == Matrix::identity(R, m));
        CHECK(mat_mul(snf.Uinv, snf.U) == Matrix::identity(R, m));
        CHECK(mat_mul(snf.V, snf.Vinv) == Matrix::identity(R, n));
        CHECK(mat_mul(snf.Vinv, snf.V) == Matrix::identity(R, n));
    }
}

TEST_CASE("SNF exponents invariant under unimodular transforms and permutations") {
    test::Rng rng(29);
    for (int trial = 0; trial < 120; ++trial) {
        CoeffRing R = test::random_ring(rng);
        std::size_t m = 1 + rng.below(5), n = 1 + rng.below(5);
        Matrix A = test::random_matrix(rng, R, m, n);
        auto base = snf_exponents(A);

        Matrix P = test::random_unimodular(rng, R, m);
        Matrix Q = test::random_unimodular(rng, R, n);
        CHECK(snf_exponents(mat_mul(mat_mul(P, A), Q)) == base);

        // row/column permutation is a special unimodular transform; check a
        // raw shuffle as well
        Matrix B = A;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = rng.below(m);
            for (std::size_t c = 0; c < n; ++c) std::swap(B.at(i, c), B.at(j, c));
        }
        CHECK(snf_exponents(B) == base);
    }
}

TEST_CASE("image plus kernel lengths add up to k * cols") {
    test::Rng rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        CoeffRing R = test::random_ring(rng);
        std::size_t m = rng.below(6), n = rng.below(6);
        Matrix A = test::random_matrix(rng, R, m, n);
        Matrix G = kernel_generators(A);
        if (G.ncols > 0) CHECK(mat_mul(A, G).is_zero());
        CHECK(image_length(A) + image_length(G) == std::uint64_t(R.k) * n);
    }
}

TEST_CASE("is_invertible") {
    CoeffRing R(2, 3);
    CHECK(is_invertible(Matrix::identity(R, 4)));
    Matrix A(R, 2, 2);
    A.at(0, 0) = 3; A.at(0, 1) = 1;
    A.at(1, 0) = 2; A.at(1, 1) = 1;
    CHECK(is_invertible(A)); // det = 1
    A.at(1, 1) = 2;          // det = 4, zero divisor
    CHECK_FALSE(is_invertible(A));
    CHECK_FALSE(is_invertible(Matrix(R, 2, 3)));
}
