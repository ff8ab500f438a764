// Compares the serial reference kernels against the OpenMP kernels on the
// three parallel axes: instance sweeps, strand degrees, and homology indices.
// Results must be identical; only the wall time differs.
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "koszulpk/graded.hpp"
#include "koszulpk/lab.hpp"
#include "koszulpk/parallel.hpp"

using namespace kpk;

namespace {

using Clock = std::chrono::steady_clock;

double run_ms(const std::function<void()>& fn) {
    auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-34s %10.1f ms %10.1f ms %8.2fx  %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    // instance sweep: profiles of a generated batch
    {
        GeneratorSpec spec;
        spec.seed = 20240;
        spec.p = 2;
        spec.k = 2;
        spec.n = 3;
        spec.max_length = 48;
        InstanceStream stream(spec);
        std::vector<GeneratedInstance> batch;
        for (int i = 0; i < 300; ++i) batch.push_back(stream.next());

        std::vector<EulerProfile> serial(batch.size()), parallel(batch.size());
        double s = run_ms([&] {
            for_each_index(batch.size(), Exec::serial, [&](std::size_t i) {
                serial[i] = euler_profile(batch[i].sys, Exec::serial);
            });
        });
        double p = run_ms([&] {
            for_each_index(batch.size(), Exec::parallel, [&](std::size_t i) {
                parallel[i] = euler_profile(batch[i].sys, Exec::serial);
            });
        });
        report("instance sweep (300 profiles)", s, p, serial == parallel);
    }

    // degree sweep: one large strand profile
    {
        CoeffRing R(3, 2);
        Polynomial x = Polynomial::variable(2, 0), y2 = Polynomial::variable(2, 1);
        auto pres = GradedPresentation::cyclic_quotient(
            R, 2,
            {poly_pow(R, x, 5), poly_mul(R, Polynomial::constant(R, 2, 3), poly_pow(R, y2, 4))});
        std::vector<KoszulSequenceEntry> y{KoszulSequenceEntry(R, x), KoszulSequenceEntry(R, y2)};
        StrandReport rs, rp;
        double s = run_ms([&] { rs = koszul_strand_profile(pres, y, 40, Exec::serial); });
        double p = run_ms([&] { rp = koszul_strand_profile(pres, y, 40, Exec::parallel); });
        report("strand profile (degrees 0..40)", s, p,
               rs.homology == rp.homology && rs.totals == rp.totals);
    }

    // homology indices within one large complex
    {
        GeneratorSpec spec;
        spec.seed = 99;
        spec.p = 2;
        spec.k = 1;
        spec.n = 3;
        spec.max_length = 64;
        spec.shape = InstanceShape::elementary_poly;
        InstanceStream stream(spec);
        ActionSystem sys = stream.next().sys;
        while (sys.module.length() < 48) sys = stream.next().sys;
        EulerProfile a, b;
        double s = run_ms([&] {
            for (int rep = 0; rep < 20; ++rep) a = euler_profile(sys, Exec::serial);
        });
        double p = run_ms([&] {
            for (int rep = 0; rep < 20; ++rep) b = euler_profile(sys, Exec::parallel);
        });
        report("homology indices (20 repeats)", s, p, a == b);
    }
    return 0;
}
