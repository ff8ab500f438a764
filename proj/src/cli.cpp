#include "koszulpk/cli.hpp"

#include <chrono>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "koszulpk/io.hpp"
#include "koszulpk/lift.hpp"

namespace kpk::cli {

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInconclusive = 3;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

json profile_json(const EulerProfile& p) {
    return json{{"h", p.h}, {"chi", p.chi}};
}

json checks_json(const std::vector<Check>& checks) {
    json out = json::array();
    for (const Check& c : checks)
        out.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return out;
}

json strand_report_json(const StrandReport& rep) {
    json table = json::array();
    for (std::size_t di = 0; di < rep.homology.size(); ++di)
        table.push_back(json{{"degree", rep.degree_min + static_cast<int>(di)},
                             {"h", rep.homology[di]}});
    return json{{"degree_min", rep.degree_min}, {"degree_bound", rep.degree_bound},
                {"window", rep.window},         {"table", table},
                {"totals", rep.totals},         {"chi", rep.chi},
                {"stabilized", rep.stabilized}};
}

void print_profile(std::ostream& os, const EulerProfile& p) {
    os << "  lambda(H_i): ";
    for (std::size_t i = 0; i < p.h.size(); ++i) os << (i ? " " : "") << p.h[i];
    os << "\n  chi_j:       ";
    for (std::size_t i = 0; i < p.chi.size(); ++i) os << (i ? " " : "") << p.chi[i];
    os << "\n";
}

void print_checks(std::ostream& os, const std::vector<Check>& checks) {
    for (const Check& c : checks) {
        os << "  " << c.name << ": " << (c.pass ? "pass" : "FAIL");
        if (!c.pass && !c.detail.empty()) os << " (" << c.detail << ")";
        os << "\n";
    }
}

void print_strand_report(std::ostream& os, const StrandReport& rep) {
    os << "  degree table (rows d = " << rep.degree_min << ".." << rep.degree_bound
       << ", columns lambda(H_0..H_" << rep.n << ")):\n";
    for (std::size_t di = 0; di < rep.homology.size(); ++di) {
        bool any = false;
        for (std::uint64_t v : rep.homology[di]) any |= (v != 0);
        if (!any) continue;
        os << "    d=" << rep.degree_min + static_cast<int>(di) << ":";
        for (std::uint64_t v : rep.homology[di]) os << " " << v;
        os << "\n";
    }
    os << "  totals:";
    for (std::uint64_t v : rep.totals) os << " " << v;
    os << "\n  chi:   ";
    for (std::int64_t v : rep.chi) os << " " << v;
    os << "\n  stabilized: " << (rep.stabilized ? "yes" : "no") << " (window " << rep.window
       << ")\n";
}

void emit(const json& report, bool as_json, const std::string& human) {
    if (as_json)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << human;
}

struct CommonOpts {
    bool json_out = false;
    bool serial = false;
    int threads = 0;

    Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
    void add_to(CLI::App* cmd) {
        cmd->add_flag("--json", json_out, "machine-readable report on stdout");
        cmd->add_flag("--serial", serial, "run the serial reference kernels");
        cmd->add_option("--threads", threads, "worker pool size (0 = library default)");
    }
    void apply() const {
#if defined(_OPENMP)
        if (threads > 0) omp_set_num_threads(threads);
#endif
    }
};

int cmd_compute(const std::string& path, int degree_bound, const CommonOpts& opts) {
    Timer timer;
    InstanceFile f = load_instance(path);
    json report{{"schema_version", 1},
                {"tool", "koszulpk"},
                {"command", "compute"},
                {"instance", json::parse(serialize_instance(f))}};
    std::ostringstream human;

    int exit_code = kExitPass;
    if (f.backend == "finite-length") {
        ActionSystem sys = instance_action_system(f);
        Verdict serre = verify_serre(sys, opts.exec());
        Verdict dichotomy = chi0_dichotomy_check(sys, opts.exec());
        Verdict boundary = boundary_identities(sys, opts.exec());
        report["profile"] = profile_json(serre.profile);
        json verdicts = json::array();
        for (const auto* v : {&serre, &dichotomy, &boundary})
            for (const json& c : checks_json(v->checks)) verdicts.push_back(c);
        report["verdicts"] = verdicts;
        if (!serre.pass() || !dichotomy.pass() || !boundary.pass()) exit_code = kExitViolation;

        human << "instance: " << path << " (finite-length, " << sys.module.R.describe()
              << ", n=" << sys.n() << ", lambda(M)=" << sys.module.length() << ")\n";
        print_profile(human, serre.profile);
        human << "verdicts:\n";
        print_checks(human, serre.checks);
        print_checks(human, dichotomy.checks);
        print_checks(human, boundary.checks);
    } else {
        auto [pres, y] = instance_graded(f);
        StrandReport rep = koszul_strand_profile(pres, y, degree_bound, opts.exec());
        report["strand_report"] = strand_report_json(rep);
        json verdicts = json::array();
        bool all_nonneg = true;
        for (std::int64_t c : rep.chi) all_nonneg &= (c >= 0);
        verdicts.push_back(json{{"name", "chi_j >= 0 (from stabilized totals)"},
                                {"pass", all_nonneg},
                                {"detail", rep.stabilized ? "" : "totals not stabilized"}});
        report["verdicts"] = verdicts;
        if (!rep.stabilized)
            exit_code = kExitInconclusive;
        else if (!all_nonneg)
            exit_code = kExitViolation;

        human << "instance: " << path << " (graded, " << pres.R.describe() << ", " << f.n
              << " variables)\n";
        print_strand_report(human, rep);
        human << "verdicts:\n  chi_j >= 0: " << (all_nonneg ? "pass" : "FAIL") << "\n";
    }
    report["timing_ms"] = timer.elapsed_ms();
    report["threads"] = worker_count(opts.exec());
    emit(report, opts.json_out, human.str());
    return exit_code;
}

int cmd_verify_serre(const GeneratorSpec& spec, std::uint64_t samples,
                     std::uint64_t oracle_bound, const CommonOpts& opts) {
    Timer timer;
    // generation advances one sequential stream; the checks are the parallel part
    InstanceStream stream(spec);
    std::vector<GeneratedInstance> instances;
    instances.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i) instances.push_back(stream.next());

    struct Row {
        bool pass = true;
        bool oracle_ran = false;
        json failure;
    };
    std::vector<Row> rows(samples);

    for_each_index(samples, opts.exec(), [&](std::size_t i) {
        const ActionSystem& sys = instances[i].sys;
        Row& row = rows[i];
        std::vector<Check> failed;
        auto take = [&](const Verdict& v) {
            for (const Check& c : v.checks)
                if (!c.pass) failed.push_back(c);
        };
        take(verify_serre(sys, Exec::serial));
        take(chi0_dichotomy_check(sys, Exec::serial));
        take(boundary_identities(sys, Exec::serial));
        LiftCertificate cert = construct_lift(sys, -1, Exec::serial);
        if (!cert.pass())
            failed.push_back({"lift certificate", false, "a lift check failed"});
        BaseChangeVerdict bc = verify_base_change(sys, cert, Exec::serial);
        if (!bc.pass) failed.push_back({"base change transport", false, bc.detail});
        try {
            OracleOptions oo;
            oo.max_module_size = oracle_bound;
            OracleResult oracle = oracle_homology(sys, oo);
            row.oracle_ran = true;
            EulerProfile prof = euler_profile(sys, Exec::serial);
            if (oracle.h != prof.h)
                failed.push_back({"oracle equivalence", false, "enumeration disagrees"});
        } catch (const SizeBoundExceeded&) {
            // instance too large for the enumeration oracle; skipped
        }
        if (!failed.empty()) {
            row.pass = false;
            row.failure = json{{"index", instances[i].index},
                               {"shape", instances[i].shape},
                               {"instance", json::parse(serialize_instance(
                                                instance_from_system(sys)))},
                               {"checks", checks_json(failed)}};
        }
    });

    std::uint64_t passed = 0, oracles = 0;
    json failures = json::array();
    for (const Row& row : rows) {
        if (row.pass) ++passed;
        else failures.push_back(row.failure);
        if (row.oracle_ran) ++oracles;
    }

    json report{{"schema_version", 1},
                {"tool", "koszulpk"},
                {"command", "verify-serre"},
                {"prng", json{{"algorithm", kPrngName}, {"seed", spec.seed}}},
                {"generator", json{{"p", spec.p},
                                   {"k", spec.k},
                                   {"n", spec.n},
                                   {"p_max", spec.p_max},
                                   {"k_max", spec.k_max},
                                   {"n_max", spec.n_max},
                                   {"max_length", spec.max_length},
                                   {"shape", shape_name(spec.shape)},
                                   {"samples", samples}}},
                {"passed", passed},
                {"failed", samples - passed},
                {"oracle_checked", oracles},
                {"failures", failures},
                {"timing_ms", timer.elapsed_ms()},
                {"threads", worker_count(opts.exec())}};

    std::ostringstream human;
    human << "verify-serre: " << passed << "/" << samples << " instances pass ("
          << shape_name(spec.shape) << ", p=" << spec.p << ", k=" << spec.k << ", n=" << spec.n
          << ", max-length=" << spec.max_length << ", seed=" << spec.seed << ", prng="
          << kPrngName << ")\n";
    human << "  oracle cross-checked on " << oracles << " instances\n";
    if (passed != samples) {
        human << "  counterexamples:\n";
        for (const json& f : failures) human << f.dump(2) << "\n";
    }
    emit(report, opts.json_out, human.str());
    return passed == samples ? kExitPass : kExitViolation;
}

int cmd_multiplicity(const std::string& path, std::uint32_t t_max, int degree_bound,
                     const CommonOpts& opts) {
    Timer timer;
    InstanceFile f = load_instance(path);
    if (f.backend != "graded") throw ParseError("multiplicity expects a graded instance");
    auto [pres, y] = instance_graded(f);
    LechTable table = lech_multiplicity_table(pres, y, t_max, degree_bound, opts.exec());

    json rows = json::array();
    for (const auto& r : table.rows) rows.push_back(json{{"t", r.t}, {"lambda", r.lambda}});
    json report{{"schema_version", 1},
                {"tool", "koszulpk"},
                {"command", "multiplicity"},
                {"instance", json::parse(serialize_instance(f))},
                {"table", rows},
                {"leading", json{{"num", table.leading_num}, {"den", table.leading_den}}},
                {"scaling_exact", table.scaling_exact},
                {"timing_ms", timer.elapsed_ms()},
                {"threads", worker_count(opts.exec())}};

    std::ostringstream human;
    human << "instance: " << path << " (graded, " << pres.R.describe() << ")\n";
    human << "  lambda(M/(y^t)M):\n";
    for (const auto& r : table.rows) human << "    t=" << r.t << ": " << r.lambda << "\n";
    human << "  leading coefficient: " << table.leading_num << "/" << table.leading_den << "\n";
    human << "  scaling law lambda(t) = t^n * lambda(1): "
          << (table.scaling_exact ? "exact" : "not satisfied") << "\n";
    emit(report, opts.json_out, human.str());
    return kExitPass;
}

int cmd_shift_check(const std::string& path, int degree_bound, const CommonOpts& opts) {
    Timer timer;
    InstanceFile f = load_instance(path);
    if (f.backend != "graded") throw ParseError("shift-check expects a graded instance");
    auto [pres, y] = instance_graded(f);
    if (pres.row_degrees != std::vector<int>{0})
        throw ParseError("shift-check expects B/J: one generator in degree 0");
    std::vector<Polynomial> gens(pres.entries.begin(), pres.entries.end());
    ShiftVerdict v = shift_check(gens, y, pres.R, pres.nvars, degree_bound, opts.exec());

    json report{{"schema_version", 1},
                {"tool", "koszulpk"},
                {"command", "shift-check"},
                {"instance", json::parse(serialize_instance(f))},
                {"pass", v.pass},
                {"inconclusive", v.inconclusive},
                {"mismatches", v.mismatches},
                {"quotient_report", strand_report_json(v.quotient_report)},
                {"submodule_report", strand_report_json(v.submodule_report)},
                {"timing_ms", timer.elapsed_ms()},
                {"threads", worker_count(opts.exec())}};

    std::ostringstream human;
    human << "instance: " << path << "\n";
    human << "shift check (H_i(y, B/J) vs H_{i-1}(y, J), i >= 2): "
          << (v.inconclusive ? "INCONCLUSIVE at this degree bound"
                             : (v.pass ? "pass" : "FAIL"))
          << "\n";
    for (const std::string& m : v.mismatches) human << "  " << m << "\n";
    human << "B/J strand report:\n";
    print_strand_report(human, v.quotient_report);
    human << "J strand report:\n";
    print_strand_report(human, v.submodule_report);
    emit(report, opts.json_out, human.str());
    if (v.inconclusive) return kExitInconclusive;
    return v.pass ? kExitPass : kExitViolation;
}

int cmd_lift(const std::string& path, const CommonOpts& opts) {
    Timer timer;
    InstanceFile f = load_instance(path);
    if (f.backend != "finite-length") throw ParseError("lift expects a finite-length instance");
    ActionSystem sys = instance_action_system(f);
    LiftCertificate cert = construct_lift(sys, -1, opts.exec());
    BaseChangeVerdict bc = verify_base_change(sys, cert, opts.exec());

    json report{{"schema_version", 1},
                {"tool", "koszulpk"},
                {"command", "lift"},
                {"instance", json::parse(serialize_instance(f))},
                {"certificate",
                 json{{"base", cert.ring.describe() + "[X_1..X_" + std::to_string(cert.n) + "]"},
                      {"delta_valuation", cert.delta_valuation},
                      {"delta_annihilates", cert.delta_annihilates},
                      {"delta_off_axes", cert.delta_off_axes},
                      {"variables_match_actions", cert.variables_match_actions},
                      {"finite_over_base", cert.finite_over_base},
                      {"regular_sop", cert.regular_sop},
                      {"coinvariant_length", cert.coinvariant_length},
                      {"regularity_degree_bound", cert.regularity_degree_bound}}},
                {"base_change",
                 json{{"pass", bc.pass},
                      {"action_pipeline", profile_json(bc.action_pipeline)},
                      {"graded_pipeline", profile_json(bc.graded_pipeline)},
                      {"detail", bc.detail}}},
                {"timing_ms", timer.elapsed_ms()},
                {"threads", worker_count(opts.exec())}};

    std::ostringstream human;
    human << "instance: " << path << "\n";
    human << "lift to B = " << cert.ring.describe() << "[X_1..X_" << cert.n << "], delta = p^"
          << cert.delta_valuation << ":\n";
    human << "  delta annihilates M: " << (cert.delta_annihilates ? "pass" : "FAIL") << "\n";
    human << "  delta outside (X): " << (cert.delta_off_axes ? "pass" : "FAIL") << "\n";
    human << "  (1) variables act as the sequence: "
          << (cert.variables_match_actions ? "pass" : "FAIL") << "\n";
    human << "  (2) M finite over B: " << (cert.finite_over_base ? "pass" : "FAIL")
          << "\n";
    human << "  (3) regular sequence + s.o.p. (lambda(B/(y)) = "
          << cert.coinvariant_length << ", degrees <= " << cert.regularity_degree_bound
          << "): " << (cert.regular_sop ? "pass" : "FAIL") << "\n";
    human << "base change transport: " << (bc.pass ? "pass" : "FAIL") << "\n";
    print_profile(human, bc.action_pipeline);
    emit(report, opts.json_out, human.str());
    return cert.pass() && bc.pass ? kExitPass : kExitViolation;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Koszul homology and partial Euler characteristics over Z/p^k"};
    app.require_subcommand(1);

    // compute
    auto* compute = app.add_subcommand("compute", "profile and verdicts for an instance file");
    std::string compute_path;
    int compute_bound = -1;
    compute->add_option("instance", compute_path, "instance file")->required();
    compute->add_option("--degree-bound", compute_bound, "graded degree bound (default: auto)");
    CommonOpts compute_opts;
    compute_opts.add_to(compute);

    // verify-serre
    auto* verify = app.add_subcommand("verify-serre", "property sweep over generated instances");
    GeneratorSpec spec;
    std::uint64_t samples = 100;
    std::uint64_t oracle_bound = 4096;
    std::string shape = "mixed";
    verify->add_option("--samples", samples, "number of instances");
    verify->add_option("--seed", spec.seed, "generator seed");
    verify->add_option("--p", spec.p, "prime (lower bound of the range)");
    verify->add_option("--k", spec.k, "coefficient ring exponent (lower bound)");
    verify->add_option("--n", spec.n, "sequence length (lower bound)");
    verify->add_option("--p-max", spec.p_max, "upper bound of the prime range");
    verify->add_option("--k-max", spec.k_max, "upper bound of the exponent range");
    verify->add_option("--n-max", spec.n_max, "upper bound of the sequence length range");
    verify->add_option("--max-length", spec.max_length, "bound on lambda(M)");
    verify->add_option("--shape", shape, "elementary-poly | p-monomial | mixed");
    verify->add_option("--oracle-bound", oracle_bound, "|M| bound for the enumeration oracle");
    CommonOpts verify_opts;
    verify_opts.add_to(verify);

    // multiplicity
    auto* mult = app.add_subcommand("multiplicity", "Lech table for a graded instance");
    std::string mult_path;
    std::uint32_t t_max = 3;
    int mult_bound = -1;
    mult->add_option("instance", mult_path, "instance file")->required();
    mult->add_option("--t-max", t_max, "largest power t");
    mult->add_option("--degree-bound", mult_bound, "degree budget (default: auto)");
    CommonOpts mult_opts;
    mult_opts.add_to(mult);

    // shift-check
    auto* shift = app.add_subcommand("shift-check", "dimension shift check for B/J");
    std::string shift_path;
    int shift_bound = -1;
    shift->add_option("instance", shift_path, "instance file")->required();
    shift->add_option("--degree-bound", shift_bound, "degree bound (default: auto)");
    CommonOpts shift_opts;
    shift_opts.add_to(shift);

    // lift
    auto* lift = app.add_subcommand("lift", "lift certificate and base change transport");
    std::string lift_path;
    lift->add_option("instance", lift_path, "instance file")->required();
    CommonOpts lift_opts;
    lift_opts.add_to(lift);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInputError : kExitPass;
    }

    try {
        if (compute->parsed()) {
            compute_opts.apply();
            return cmd_compute(compute_path, compute_bound, compute_opts);
        }
        if (verify->parsed()) {
            verify_opts.apply();
            if (shape == "elementary-poly")
                spec.shape = InstanceShape::elementary_poly;
            else if (shape == "p-monomial")
                spec.shape = InstanceShape::p_monomial;
            else if (shape == "mixed")
                spec.shape = InstanceShape::mixed;
            else
                throw ParseError("unknown shape \"" + shape + "\"");
            return cmd_verify_serre(spec, samples, oracle_bound, verify_opts);
        }
        if (mult->parsed()) {
            mult_opts.apply();
            return cmd_multiplicity(mult_path, t_max, mult_bound, mult_opts);
        }
        if (shift->parsed()) {
            shift_opts.apply();
            return cmd_shift_check(shift_path, shift_bound, shift_opts);
        }
        if (lift->parsed()) {
            lift_opts.apply();
            return cmd_lift(lift_path, lift_opts);
        }
    } catch (const DegreeBudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return kExitInconclusive;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

} // namespace kpk::cli
