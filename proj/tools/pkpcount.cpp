// Command-line front end: closed-form expectations, instance generation,
// solution counting, exhaustive and Monte Carlo validation, and CSV sweeps.
//
// Exit codes: 0 success, 2 parameter or input error, 3 cap refusal,
// 1 internal error (or a selftest/enumerate-exact mismatch, which would mean
// a real bug).

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pkp/expectation.hpp"
#include "pkp/generators.hpp"
#include "pkp/oracle.hpp"

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "variant,q,ell,m,n,exact_num,exact_den,exact_decimal,exact_minus_one_decimal,"
    "heuristic_decimal,ratio_decimal";

struct CommonFlags {
    long long q = 2;
    unsigned ell = 1, m = 1, n = 1;
    std::string variant;
    unsigned digits = 12;
    std::string format = "text";
    std::string out;
    bool allow_any_q = false;
    bool outside_validity = false;

    pkp::ParameterSet params() const {
        pkp::ParameterSet p;
        p.q = q;
        p.ell = ell;
        p.m = m;
        p.n = n;
        p.variant = pkp::parse_variant(variant);
        return p;
    }
};

void add_param_flags(CLI::App* cmd, CommonFlags& f, bool with_n = true) {
    cmd->add_option("--q", f.q, "Field size q")->required();
    cmd->add_option("--ell", f.ell, "Rows of A")->required();
    cmd->add_option("--m", f.m, "Permuted dimension m")->required();
    if (with_n) cmd->add_option("--n", f.n, "Columns of B (default 1)");
    cmd->add_option("--variant", f.variant, "ipkp | ipkp_star | pkp | pkp_star")->required();
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--digits", f.digits, "Significant digits for decimal renderings");
    cmd->add_option("--format", f.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", f.out, "Write output to this file instead of stdout");
}

// stdout unless --out was given.
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_)
                throw pkp::parameter_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void warn_prime_power(const pkp::ParameterSet& p, bool allow_any_q) {
    if (!p.check_prime_power_q(allow_any_q))
        std::cerr << "warning: q = " << p.q
                  << " is not a prime power; the formulas are evaluated as plain "
                     "arithmetic expressions\n";
}

json rational_json(const pkp::Rat& x) {
    return json{{"num", numerator(x).str()}, {"den", denominator(x).str()}};
}

json report_json(const pkp::ExpectationReport& r, unsigned digits) {
    json j;
    j["variant"] = pkp::to_string(r.params.variant);
    j["q"] = r.params.q;
    j["ell"] = r.params.ell;
    j["m"] = r.params.m;
    j["n"] = r.params.n;
    j["outside_validity"] = r.outside_validity;
    j["exact"] = rational_json(r.exact);
    j["exact_decimal"] = pkp::to_decimal(r.exact, digits);
    j["exact_minus_one"] = rational_json(r.exact_minus_one);
    j["exact_minus_one_decimal"] = pkp::to_decimal(r.exact_minus_one, digits);
    j["heuristic"] = rational_json(r.heuristic);
    j["heuristic_decimal"] = pkp::to_decimal(r.heuristic, digits);
    j["ratio"] = rational_json(r.ratio);
    j["ratio_decimal"] = pkp::to_decimal(r.ratio, digits);
    return j;
}

std::string report_csv_row(const pkp::ExpectationReport& r, unsigned digits) {
    std::ostringstream os;
    os << pkp::to_string(r.params.variant) << ',' << r.params.q << ',' << r.params.ell
       << ',' << r.params.m << ',' << r.params.n << ','
       << numerator(r.exact).str() << ',' << denominator(r.exact).str() << ','
       << pkp::to_decimal(r.exact, digits) << ','
       << pkp::to_decimal(r.exact_minus_one, digits) << ','
       << pkp::to_decimal(r.heuristic, digits) << ','
       << pkp::to_decimal(r.ratio, digits);
    return os.str();
}

void print_report_text(std::ostream& os, const pkp::ExpectationReport& r, unsigned digits) {
    os << "variant                 = " << pkp::to_string(r.params.variant) << "\n"
       << "q                       = " << r.params.q << "\n"
       << "ell                     = " << r.params.ell << "\n"
       << "m                       = " << r.params.m << "\n"
       << "n                       = " << r.params.n << "\n";
    if (r.outside_validity)
        os << "outside_validity        = true (value is an unproven extrapolation)\n";
    os << "exact                   = " << pkp::to_fraction_string(r.exact) << "\n"
       << "exact_decimal           = " << pkp::to_decimal(r.exact, digits) << "\n"
       << "exact_minus_one         = " << pkp::to_fraction_string(r.exact_minus_one) << "\n"
       << "exact_minus_one_decimal = " << pkp::to_decimal(r.exact_minus_one, digits) << "\n"
       << "heuristic               = " << pkp::to_fraction_string(r.heuristic) << "\n"
       << "heuristic_decimal       = " << pkp::to_decimal(r.heuristic, digits) << "\n"
       << "ratio_decimal           = " << pkp::to_decimal(r.ratio, digits) << "\n";
}

int run_expect(const CommonFlags& f) {
    pkp::ParameterSet p = f.params();
    // --outside-validity also waives the generator-class constraints (there
    // may be no instances at all, e.g. the star classes with m >= q); the
    // evaluation still rejects parameters where the expression is undefined.
    if (!f.outside_validity) p.validate();
    warn_prime_power(p, f.allow_any_q);
    const pkp::ExpectationReport r = pkp::evaluate(p, {f.outside_validity});
    if (r.outside_validity)
        std::cerr << "note: parameters are outside the stated validity of the formula\n";
    OutputSink sink(f.out);
    if (f.format == "json") {
        sink.stream() << report_json(r, f.digits).dump(2) << "\n";
    } else if (f.format == "csv") {
        sink.stream() << kCsvHeader << "\n" << report_csv_row(r, f.digits) << "\n";
    } else {
        print_report_text(sink.stream(), r, f.digits);
    }
    return 0;
}

int run_heuristic(const CommonFlags& f) {
    pkp::ParameterSet p = f.params();
    p.validate();
    warn_prime_power(p, f.allow_any_q);
    const pkp::Rat h = pkp::heuristic_expectation(p);
    OutputSink sink(f.out);
    if (f.format == "json") {
        json j;
        j["variant"] = pkp::to_string(p.variant);
        j["q"] = p.q;
        j["ell"] = p.ell;
        j["m"] = p.m;
        j["n"] = p.n;
        j["heuristic"] = rational_json(h);
        j["heuristic_decimal"] = pkp::to_decimal(h, f.digits);
        sink.stream() << j.dump(2) << "\n";
    } else {
        sink.stream() << "heuristic         = " << pkp::to_fraction_string(h) << "\n"
                      << "heuristic_decimal = " << pkp::to_decimal(h, f.digits) << "\n";
    }
    return 0;
}

int run_gen(const CommonFlags& f, std::uint64_t seed, bool with_secret) {
    pkp::ParameterSet p = f.params();
    p.validate();
    p.require_prime_q();
    pkp::SeededRng rng(seed);
    const pkp::Instance inst = pkp::generate(p, rng);
    OutputSink sink(f.out);
    sink.stream() << pkp::serialize(inst, with_secret);
    return 0;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw pkp::parameter_error("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_count(const std::string& path, unsigned cap, const CommonFlags& f) {
    const pkp::Instance inst = pkp::deserialize(read_input(path));
    const pkp::SolutionCount sc = std::visit(
        [&](const auto& x) { return pkp::count_solutions(x, cap); }, inst);
    OutputSink sink(f.out);
    if (f.format == "json") {
        json j;
        j["n_sol"] = sc.n_sol;
        j["enumerated"] = sc.enumerated.str();
        j["contains_secret"] = sc.contains_secret;
        sink.stream() << j.dump(2) << "\n";
    } else {
        sink.stream() << "n_sol           = " << sc.n_sol << "\n"
                      << "enumerated      = " << sc.enumerated.str() << "\n"
                      << "contains_secret = " << (sc.contains_secret ? "true" : "false")
                      << "\n";
    }
    return 0;
}

int run_mc(const CommonFlags& f, std::uint64_t samples, std::uint64_t seed, unsigned cap) {
    pkp::ParameterSet p = f.params();
    const pkp::MonteCarloReport r = pkp::monte_carlo_expectation(p, samples, seed, cap);
    OutputSink sink(f.out);
    if (f.format == "json") {
        json j;
        j["variant"] = pkp::to_string(p.variant);
        j["q"] = p.q;
        j["ell"] = p.ell;
        j["m"] = p.m;
        j["n"] = p.n;
        j["samples"] = r.samples;
        j["seed"] = r.seed;
        j["mean"] = rational_json(r.mean);
        j["mean_decimal"] = pkp::to_decimal(r.mean, f.digits);
        j["variance_estimate_decimal"] = pkp::to_decimal(r.variance_estimate, f.digits);
        j["exact_reference"] = rational_json(r.exact_reference);
        j["exact_reference_decimal"] = pkp::to_decimal(r.exact_reference, f.digits);
        j["z_score"] = r.z_score;
        j["status"] = r.pass ? "PASS" : "FAIL";
        sink.stream() << j.dump(2) << "\n";
    } else {
        sink.stream() << "samples           = " << r.samples << "\n"
                      << "seed              = " << r.seed << "\n"
                      << "mean              = " << pkp::to_fraction_string(r.mean) << " ("
                      << pkp::to_decimal(r.mean, f.digits) << ")\n"
                      << "variance_estimate = " << pkp::to_decimal(r.variance_estimate, f.digits)
                      << "\n"
                      << "exact_reference   = " << pkp::to_fraction_string(r.exact_reference)
                      << " (" << pkp::to_decimal(r.exact_reference, f.digits) << ")\n"
                      << "z_score           = " << r.z_score << "\n"
                      << "status            = " << (r.pass ? "PASS" : "FAIL") << "\n";
    }
    return 0;
}

int run_enumerate_exact(const CommonFlags& f, std::uint64_t cap) {
    pkp::ParameterSet p = f.params();
    const pkp::Rat oracle = pkp::exhaustive_expectation(p, cap);
    const pkp::Rat formula = pkp::evaluate(p).exact;
    const bool equal = oracle == formula;
    OutputSink sink(f.out);
    if (f.format == "json") {
        json j;
        j["variant"] = pkp::to_string(p.variant);
        j["q"] = p.q;
        j["ell"] = p.ell;
        j["m"] = p.m;
        j["n"] = p.n;
        j["exhaustive"] = rational_json(oracle);
        j["formula"] = rational_json(formula);
        j["equal"] = equal;
        sink.stream() << j.dump(2) << "\n";
    } else {
        sink.stream() << "exhaustive = " << pkp::to_fraction_string(oracle) << " ("
                      << pkp::to_decimal(oracle, f.digits) << ")\n"
                      << "formula    = " << pkp::to_fraction_string(formula) << " ("
                      << pkp::to_decimal(formula, f.digits) << ")\n"
                      << "equal      = " << (equal ? "true" : "false") << "\n";
    }
    if (!equal) {
        std::cerr << "error: exhaustive oracle and closed form disagree\n";
        return 1;
    }
    return 0;
}

struct Range {
    long long lo = 0, hi = 0;
};

Range parse_range(const std::string& text, const char* flag) {
    Range r;
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoll(text);
        } else {
            r.lo = std::stoll(text.substr(0, dots));
            r.hi = std::stoll(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw pkp::parameter_error(std::string(flag) + ": expected K or LO..HI, got \"" +
                                   text + "\"");
    }
    if (r.lo > r.hi)
        throw pkp::parameter_error(std::string(flag) + ": empty range \"" + text + "\"");
    return r;
}

int run_table(const std::string& variant, const std::string& qs, const std::string& ells,
              const std::string& ms, const std::string& ns, const CommonFlags& f) {
    const pkp::Variant v = pkp::parse_variant(variant);
    const Range rq = parse_range(qs, "--q"), rell = parse_range(ells, "--ell"),
                rm = parse_range(ms, "--m"), rn = parse_range(ns, "--n");
    OutputSink sink(f.out);
    sink.stream() << kCsvHeader << "\n";
    std::uint64_t rows = 0, skipped = 0;
    for (long long q = rq.lo; q <= rq.hi; ++q)
        for (long long ell = rell.lo; ell <= rell.hi; ++ell)
            for (long long m = rm.lo; m <= rm.hi; ++m)
                for (long long n = rn.lo; n <= rn.hi; ++n) {
                    pkp::ParameterSet p;
                    p.q = q;
                    p.ell = static_cast<unsigned>(ell);
                    p.m = static_cast<unsigned>(m);
                    p.n = static_cast<unsigned>(n);
                    p.variant = v;
                    try {
                        if (!f.outside_validity) p.validate();
                        p.check_prime_power_q(f.allow_any_q);
                        const auto r = pkp::evaluate(p, {f.outside_validity});
                        sink.stream() << report_csv_row(r, f.digits) << "\n";
                        ++rows;
                    } catch (const pkp::parameter_error& e) {
                        ++skipped;
                        std::cerr << "skipping q=" << q << " ell=" << ell << " m=" << m
                                  << " n=" << n << ": " << e.what() << "\n";
                    }
                }
    if (rows == 0)
        throw pkp::parameter_error("table: no valid grid point (all " +
                                   std::to_string(skipped) + " skipped)");
    return 0;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

int run_selftest(bool full) {
    using pkp::ParameterSet;
    using pkp::Variant;
    unsigned failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failures;
    };

    auto oracle_matches = [](const ParameterSet& p, std::uint64_t cap) {
        return pkp::exhaustive_expectation(p, cap) == pkp::evaluate(p).exact;
    };

    const std::vector<ParameterSet> fast_sets = {
        {2, 1, 2, 1, Variant::ipkp},     {2, 1, 3, 1, Variant::ipkp},
        {3, 1, 2, 1, Variant::ipkp},     {3, 1, 3, 1, Variant::ipkp},
        {5, 1, 3, 1, Variant::ipkp},     {5, 1, 3, 1, Variant::ipkp_star},
        {7, 1, 3, 1, Variant::ipkp_star},{2, 1, 2, 1, Variant::pkp},
        {3, 1, 2, 1, Variant::pkp},      {3, 1, 3, 1, Variant::pkp},
        {5, 1, 3, 1, Variant::pkp},      {5, 1, 3, 1, Variant::pkp_star},
        {7, 1, 3, 1, Variant::pkp_star},
    };
    for (const auto& p : fast_sets) {
        std::ostringstream name;
        name << "oracle == formula, " << pkp::to_string(p.variant) << " (q=" << p.q
             << ", ell=" << p.ell << ", m=" << p.m << ", n=" << p.n << ")";
        check(name.str(), oracle_matches(p, 10'000'000));
    }
    if (full) {
        check("oracle == formula, ipkp (q=3, ell=2, m=3, n=1)",
              oracle_matches({3, 2, 3, 1, Variant::ipkp}, 10'000'000));
        check("oracle == formula, ipkp_star (q=7, ell=2, m=3, n=1)",
              oracle_matches({7, 2, 3, 1, Variant::ipkp_star}, 100'000'000));
        check("oracle == formula, pkp_star (q=7, ell=2, m=4, n=1)",
              oracle_matches({7, 2, 4, 1, Variant::pkp_star}, 1'000'000'000));
    }

    for (const auto& p : {ParameterSet{2, 1, 2, 1, Variant::pkp},
                          ParameterSet{3, 1, 3, 1, Variant::pkp},
                          ParameterSet{5, 1, 3, 1, Variant::pkp_star}}) {
        std::ostringstream name;
        name << "kernel-coefficient and direct homogeneous oracles agree ("
             << pkp::to_string(p.variant) << " q=" << p.q << ", ell=" << p.ell
             << ", m=" << p.m << ")";
        check(name.str(), pkp::exhaustive_expectation(p) ==
                              pkp::exhaustive_expectation_pkp_direct(p));
    }

    {
        bool ok = true;
        for (long long q : {2, 3, 5}) {
            for (unsigned m = 1; m <= 4; ++m) {
                pkp::Int brute = 0;
                pkp::for_each_permutation(m, [&](const std::vector<std::uint32_t>& im) {
                    brute += pkp::count_eigenvectors(pkp::Permutation(im), q, false);
                });
                ok = ok && brute == pkp::sum_eigenvector_counts(m, q);
                if (static_cast<long long>(m) <= q - 1) {
                    pkp::Int bstar = 0;
                    pkp::for_each_permutation(m, [&](const std::vector<std::uint32_t>& im) {
                        bstar += pkp::count_eigenvectors(pkp::Permutation(im), q, true);
                    });
                    ok = ok && bstar == pkp::sum_eigenvector_counts_star(m, q);
                }
            }
        }
        check("eigenvector census sums match brute force (m <= 4, q in {2,3,5})", ok);
    }
    {
        bool ok = true;
        for (long long q : {3, 5})
            for (unsigned m = 1; m <= 5; ++m)
                for (std::uint64_t d : pkp::divisors(static_cast<std::uint64_t>(q - 1)))
                    ok = ok && pkp::check_cycle_identity(m, q, d);
        check("cycle-count identity (m <= 5, q in {3,5})", ok);
    }
    {
        bool ok = true;
        for (long long q : {5, 7, 11, 13})
            for (unsigned m = 1; static_cast<long long>(m) <= q - 2; ++m)
                ok = ok && pkp::check_star_census_bound(m, q);
        check("distinct-entry census bound (q in {5,7,11,13})", ok);
    }
    {
        bool ok = true;
        for (long long q : {2, 3})
            for (unsigned m1 = 0; m1 <= 5; ++m1)
                for (unsigned m2 = 0; m1 + m2 <= 5; ++m2)
                    for (unsigned ell = 0; ell <= m1 + m2; ++ell) {
                        pkp::Rat mass = 0;
                        for (unsigned r = 0; r <= std::min(ell, m1); ++r)
                            mass += pkp::prob_block_rank(ell, m1, m2, r, q);
                        ok = ok && mass == 1;
                    }
        check("block-rank probabilities sum to 1 (sizes <= 5, q in {2,3})", ok);
    }
    {
        bool ok = true;
        pkp::SeededRng rng(2024);
        for (int trial = 0; trial < 20; ++trial) {
            ParameterSet p{5, 2, 5, 1, Variant::ipkp};
            const auto inst = pkp::gen_ipkp(p, rng);
            ok = ok && pkp::count_solutions(inst).n_sol ==
                           pkp::count_solutions_reference(inst).n_sol;
        }
        check("prefix-sharing and reference solution counters agree", ok);
    }
    {
        bool ok = true;
        pkp::SeededRng rng(99);
        for (Variant v : {Variant::ipkp, Variant::ipkp_star, Variant::pkp, Variant::pkp_star}) {
            ParameterSet p{7, 1, 4, 1, v};
            const pkp::Instance inst = pkp::generate(p, rng);
            const std::string text = pkp::serialize(inst, true);
            ok = ok && pkp::serialize(pkp::deserialize(text), true) == text;
        }
        check("serialize/deserialize round trip (all variants)", ok);
    }
    {
        ParameterSet p{7, 2, 5, 1, Variant::ipkp};
        pkp::SeededRng r1(7), r2(7);
        check("generation is deterministic for a fixed seed",
              pkp::serialize(pkp::generate(p, r1), true) ==
                  pkp::serialize(pkp::generate(p, r2), true));
    }

    std::cout << (failures == 0 ? "selftest: all checks passed"
                                : "selftest: " + std::to_string(failures) + " check(s) FAILED")
              << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expected solution counts for random permuted-kernel instances"};
    app.require_subcommand(1);

    CommonFlags expect_f, heuristic_f, gen_f, mc_f, enum_f, count_f, table_f;

    auto* expect = app.add_subcommand(
        "expect", "Evaluate the exact expectation formula and the heuristic");
    add_param_flags(expect, expect_f);
    add_output_flags(expect, expect_f);
    expect->add_flag("--allow-any-q", expect_f.allow_any_q,
                     "Only warn when q is not a prime power");
    expect->add_flag("--outside-validity", expect_f.outside_validity,
                     "Evaluate the formula outside its proven hypotheses and label the result");

    auto* heuristic =
        app.add_subcommand("heuristic", "Evaluate only the classical heuristic m!/q^(ell n)");
    add_param_flags(heuristic, heuristic_f);
    add_output_flags(heuristic, heuristic_f);
    heuristic->add_flag("--allow-any-q", heuristic_f.allow_any_q,
                        "Only warn when q is not a prime power");

    std::uint64_t gen_seed = 0;
    bool gen_with_secret = false;
    auto* gen = app.add_subcommand("gen", "Generate a random instance and write it out");
    add_param_flags(gen, gen_f);
    gen->add_option("--seed", gen_seed, "RNG seed (default 0)");
    gen->add_flag("--with-secret", gen_with_secret, "Include the secret permutation");
    gen->add_option("--out", gen_f.out, "Output file (default stdout)");

    std::string count_path;
    unsigned count_cap = pkp::kCountSolutionsCapDefault;
    auto* count = app.add_subcommand("count", "Count the solutions of an instance file");
    count->add_option("file", count_path, "Instance file (\"-\" for stdin)")->required();
    count->add_option("--cap", count_cap, "Maximum m for enumeration (default 12)");
    count->add_option("--format", count_f.format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    count->add_option("--out", count_f.out, "Write output to this file instead of stdout");

    std::uint64_t mc_samples = 100000, mc_seed = 0;
    unsigned mc_cap = pkp::kCountSolutionsCapDefault;
    auto* mc = app.add_subcommand(
        "mc", "Monte Carlo estimate of the expectation, compared to the exact formula");
    add_param_flags(mc, mc_f);
    add_output_flags(mc, mc_f);
    mc->add_option("--samples", mc_samples, "Number of sampled instances (default 100000)");
    mc->add_option("--seed", mc_seed, "RNG seed (default 0)");
    mc->add_option("--cap", mc_cap, "Maximum m for solution counting (default 12)");

    std::uint64_t enum_cap = pkp::kExhaustiveCapDefault;
    auto* enumerate = app.add_subcommand(
        "enumerate-exact", "Average the solution count over the whole instance space "
                           "and compare to the formula");
    add_param_flags(enumerate, enum_f);
    add_output_flags(enumerate, enum_f);
    enumerate->add_option("--cap", enum_cap,
                          "Maximum number of weighted instance points (default 10^7)");

    std::string tq, tell, tm, tn = "1", tvariant;
    auto* table = app.add_subcommand("table", "Sweep a parameter grid and emit CSV rows");
    table->add_option("--q", tq, "q value or range LO..HI")->required();
    table->add_option("--ell", tell, "ell value or range LO..HI")->required();
    table->add_option("--m", tm, "m value or range LO..HI")->required();
    table->add_option("--n", tn, "n value or range LO..HI (default 1)");
    table->add_option("--variant", tvariant, "ipkp | ipkp_star | pkp | pkp_star")->required();
    add_output_flags(table, table_f);
    table->add_flag("--allow-any-q", table_f.allow_any_q,
                    "Only warn when q is not a prime power");
    table->add_flag("--outside-validity", table_f.outside_validity,
                    "Evaluate grid points outside the proven hypotheses as well");

    bool selftest_full = false;
    auto* selftest =
        app.add_subcommand("selftest", "Run the bundled oracle-equivalence checks");
    selftest->add_flag("--full", selftest_full,
                       "Include the large exhaustive enumerations (a few extra seconds)");

    try {
        app.parse(argc, argv);
        if (expect->parsed()) return run_expect(expect_f);
        if (heuristic->parsed()) return run_heuristic(heuristic_f);
        if (gen->parsed()) return run_gen(gen_f, gen_seed, gen_with_secret);
        if (count->parsed()) return run_count(count_path, count_cap, count_f);
        if (mc->parsed()) return run_mc(mc_f, mc_samples, mc_seed, mc_cap);
        if (enumerate->parsed()) return run_enumerate_exact(enum_f, enum_cap);
        if (table->parsed()) return run_table(tvariant, tq, tell, tm, tn, table_f);
        if (selftest->parsed()) return run_selftest(selftest_full);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pkp::parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pkp::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pkp::cap_refusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
