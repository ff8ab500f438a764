#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "koszulpk/lab.hpp"
#include "koszulpk/lift.hpp"
#include "test_support.hpp"

using namespace kpk;

namespace {

ActionSystem z4_times2() {
    CoeffRing R(2, 2);
    FinModule m(R, {2});
    return ActionSystem(m, std::vector<Matrix>{mat_scaled(2, Matrix::identity(R, 1))});
}

} // namespace

TEST_CASE("construct_lift: frozen examples") {
    SUBCASE("Z/4 with *2: B = Z/4[X], all checks pass") {
        LiftCertificate cert = construct_lift(z4_times2());
        CHECK(cert.pass());
        CHECK(cert.n == 1);
        CHECK(cert.delta_valuation == 2);
        CHECK(cert.coinvariant_length == 2); // lambda(B/(X)) = k
    }
    SUBCASE("n = 2: lambda(B/(y)) = k") {
        CoeffRing R(2, 2);
        FinModule m(R, {2, 1});
        Matrix a(R, 2, 2), b(R, 2, 2);
        a.at(1, 0) = 1;
        b.at(1, 0) = 2;
        ActionSystem sys(m, std::vector<Matrix>{a, b});
        LiftCertificate cert = construct_lift(sys);
        CHECK(cert.pass());
        CHECK(cert.coinvariant_length == 2);
    }
    SUBCASE("zero module passes trivially") {
        CoeffRing R(3, 2);
        FinModule zero(R, {});
        ActionSystem sys(zero, std::vector<Matrix>{Matrix(R, 0, 0)});
        CHECK(construct_lift(sys).pass());
    }
}

TEST_CASE("verify_base_change: frozen examples") {
    SUBCASE("Z/4 with *2: both pipelines give (1,1)") {
        ActionSystem sys = z4_times2();
        BaseChangeVerdict v = verify_base_change(sys, construct_lift(sys));
        CHECK(v.pass);
        CHECK(v.action_pipeline.h == std::vector<std::uint64_t>{1, 1});
        CHECK(v.graded_pipeline.h == std::vector<std::uint64_t>{1, 1});
    }
    SUBCASE("zero actions on Z/2, n = 2: both give (1,2,1)") {
        CoeffRing R(2, 1);
        FinModule m(R, {1});
        std::vector<Matrix> zeros(2, Matrix(R, 1, 1));
        ActionSystem sys(m, zeros);
        BaseChangeVerdict v = verify_base_change(sys, construct_lift(sys));
        CHECK(v.pass);
        CHECK(v.action_pipeline.h == std::vector<std::uint64_t>{1, 2, 1});
    }
}

TEST_CASE("base change transport on generated instances") {
    for (auto [p, k, n] : {std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>{2, 2, 1},
                           {2, 1, 2}, {3, 2, 2}, {2, 3, 3}, {5, 1, 2}}) {
        GeneratorSpec spec;
        spec.seed = 900 + p + 10 * n;
        spec.p = p;
        spec.k = k;
        spec.n = n;
        spec.max_length = 10;
        InstanceStream stream(spec);
        for (int t = 0; t < 8; ++t) {
            GeneratedInstance inst = stream.next();
            LiftCertificate cert = construct_lift(inst.sys);
            CHECK(cert.pass());
            CHECK(verify_base_change(inst.sys, cert).pass);
        }
    }
}

TEST_CASE("serial and parallel lift verdicts agree") {
    ActionSystem sys = z4_times2();
    LiftCertificate cert = construct_lift(sys);
    BaseChangeVerdict a = verify_base_change(sys, cert, Exec::serial);
    BaseChangeVerdict b = verify_base_change(sys, cert, Exec::parallel);
    CHECK(a.pass == b.pass);
    CHECK(a.action_pipeline == b.action_pipeline);
    CHECK(a.graded_pipeline == b.graded_pipeline);
}
