#include <catch2/catch_amalgamated.hpp>

#include "pkp/oracle.hpp"
#include "support/test_helpers.hpp"

using namespace pkp;

TEST_CASE("count_solutions hand examples", "[oracle]") {
    // q=2, ell=1, m=2: A = (1 1), B = (1, 0)^T, C = (1): both permutations solve
    {
        IpkpInstance inst{ParameterSet{2, 1, 2, 1, Variant::ipkp},
                          FqMatrix(1, 2, 2, {1, 1}), FqMatrix(2, 1, 2, {1, 0}),
                          FqMatrix(1, 1, 2, {1}), std::nullopt};
        const auto sc = count_solutions(inst);
        CHECK(sc.n_sol == 2);
        CHECK(sc.enumerated == 2);
        CHECK_FALSE(sc.contains_secret);
    }
    // q=2, ell=1, m=2: A = (1 0), B = (1, 0)^T, C = (0): only the swap
    {
        IpkpInstance inst{ParameterSet{2, 1, 2, 1, Variant::ipkp},
                          FqMatrix(1, 2, 2, {1, 0}), FqMatrix(2, 1, 2, {1, 0}),
                          FqMatrix(1, 1, 2, {0}), std::nullopt};
        CHECK(count_solutions(inst).n_sol == 1);
    }
}

TEST_CASE("generated instances contain their secret", "[oracle]") {
    SeededRng rng(51);
    for (Variant v : {Variant::ipkp, Variant::ipkp_star, Variant::pkp, Variant::pkp_star}) {
        const ParameterSet p{7, 1, 4, 1, v};
        const Instance inst = generate(p, rng);
        const auto sc =
            std::visit([](const auto& x) { return count_solutions(x); }, inst);
        CHECK(sc.n_sol >= 1);
        CHECK(sc.contains_secret);
        CHECK(sc.enumerated == 24);
    }
}

TEST_CASE("count_solutions refuses above the cap", "[oracle]") {
    IpkpInstance big{ParameterSet{2, 1, 13, 1, Variant::ipkp},
                     FqMatrix(1, 13, 2), FqMatrix(13, 1, 2), FqMatrix(1, 1, 2),
                     std::nullopt};
    big.A.at(0, 0) = 1;
    big.B.at(0, 0) = 1;
    CHECK_THROWS_AS(count_solutions(big), cap_refusal);
    CHECK_THROWS_AS(count_solutions(big, 12), cap_refusal);

    // the cap is overridable (checked at a size that stays cheap)
    SeededRng rng(54);
    const IpkpInstance small = gen_ipkp(ParameterSet{5, 1, 4, 1, Variant::ipkp}, rng);
    CHECK_THROWS_AS(count_solutions(small, 3), cap_refusal);
    CHECK(count_solutions(small, 4).n_sol >= 1);
}

TEST_CASE("prefix-sharing counter agrees with the no-sharing reference", "[oracle]") {
    SeededRng rng(52);
    for (int trial = 0; trial < 30; ++trial) {
        const long long q = (trial % 2 == 0) ? 3 : 7;
        const unsigned m = 3 + trial % 4;
        const unsigned n = 1 + trial % 2;
        const unsigned ell = 1 + trial % 2;
        if (std::max(ell, n) > m) continue;
        const ParameterSet p{q, ell, m, n, Variant::ipkp};
        const IpkpInstance inst = gen_ipkp(p, rng);
        // also against arbitrary right-hand sides, not only generated ones
        IpkpInstance scrambled = inst;
        scrambled.C = sample_uniform_matrix(ell, n, q, rng);
        scrambled.secret.reset();
        CHECK(count_solutions(inst).n_sol == count_solutions_reference(inst).n_sol);
        CHECK(count_solutions(scrambled).n_sol ==
              count_solutions_reference(scrambled).n_sol);
    }
}

TEST_CASE("solution count depends only on the orbit of the instance", "[oracle]") {
    // relabeling B's rows by tau and composing the secret accordingly leaves
    // n_sol unchanged; exhaustive over tau at m = 3
    SeededRng rng(53);
    const ParameterSet p{5, 1, 3, 1, Variant::ipkp};
    for (int trial = 0; trial < 5; ++trial) {
        const IpkpInstance inst = gen_ipkp(p, rng);
        const auto base = count_solutions(inst).n_sol;
        for_each_permutation(3, [&](const std::vector<std::uint32_t>& ti) {
            const Permutation tau(ti);
            IpkpInstance moved = inst;
            moved.B = permute_rows(tau, inst.B);
            // rho solves the moved instance iff compose(rho, tau) solves the
            // original: mat(rho) mat(tau) B = mat(compose(rho, tau)) B
            moved.secret = compose(*inst.secret, tau.inverse());
            CHECK(count_solutions(moved).n_sol == base);
            CHECK(count_solutions(moved).contains_secret);
        });
    }
}

TEST_CASE("exhaustive expectation equals the formulas on tiny spaces", "[oracle]") {
    // documented 6-point enumeration: q=2, ell=1, m=2, n=1 homogeneous.
    // B ranges over the 3 nonzero vectors of F_2^2, pi over S_2, and the
    // kernel-coefficient space has a single full-rank 1x1 matrix, so there
    // are exactly 3 * 2 * 1 = 6 weighted points. Per (B, pi), A is the one
    // nonzero row annihilating pi B; the identity always solves, and the swap
    // solves as well exactly when B = (1, 1)^T (for either pi), giving
    // N_sol = 1, 1, 1, 1, 2, 2 over the six points: the mean is 4/3.
    const ParameterSet anchor{2, 1, 2, 1, Variant::pkp};
    CHECK(exhaustive_expectation(anchor) == make_rational(4, 3));
    CHECK(expected_pkp_mono(anchor) == make_rational(4, 3));

    CHECK(exhaustive_expectation(ParameterSet{3, 1, 3, 1, Variant::ipkp}) ==
          expected_ipkp(ParameterSet{3, 1, 3, 1, Variant::ipkp}));
    CHECK(exhaustive_expectation(ParameterSet{7, 1, 3, 1, Variant::ipkp_star}) ==
          make_rational(97, 57));
}

TEST_CASE("kernel-coefficient and direct conditional enumerations agree", "[oracle]") {
    for (const ParameterSet& p :
         {ParameterSet{2, 1, 2, 1, Variant::pkp}, ParameterSet{3, 1, 2, 1, Variant::pkp},
          ParameterSet{3, 1, 3, 1, Variant::pkp}, ParameterSet{5, 1, 3, 1, Variant::pkp},
          ParameterSet{5, 1, 3, 1, Variant::pkp_star},
          ParameterSet{7, 1, 3, 1, Variant::pkp_star}}) {
        CHECK(exhaustive_expectation(p) == exhaustive_expectation_pkp_direct(p));
    }
    CHECK_THROWS_AS(
        exhaustive_expectation_pkp_direct(ParameterSet{3, 1, 3, 1, Variant::ipkp}),
        parameter_error);
}

TEST_CASE("exhaustive expectation refuses oversized spaces with an estimate",
          "[oracle]") {
    try {
        exhaustive_expectation(ParameterSet{7, 2, 5, 1, Variant::ipkp});
        FAIL("expected cap_refusal");
    } catch (const cap_refusal& e) {
        const std::string what = e.what();
        CHECK(what.find("weighted points") != std::string::npos);
        CHECK(what.find("cap") != std::string::npos);
    }
    CHECK_THROWS_AS(exhaustive_expectation(ParameterSet{4, 1, 2, 1, Variant::ipkp}),
                    parameter_error); // composite q
}

TEST_CASE("eigenvector census by brute force", "[oracle]") {
    // identity: every nonzero vector, eigenvalue 1
    for (long long q : {2, 3, 5})
        for (unsigned m : {1u, 2u, 3u})
            CHECK(count_eigenvectors(Permutation::identity(m), q, false) ==
                  pow_int(Int(q), m) - 1);

    // q=3, m=2 swap: 2 vectors for each of the two eigenvalues
    CHECK(count_eigenvectors(Permutation({1, 0}), 3, false) == 4);

    // the star census over S_2 at q=3 sums to 4
    Int star_total = 0;
    for_each_permutation(2, [&](const std::vector<std::uint32_t>& im) {
        star_total += count_eigenvectors(Permutation(im), 3, true);
    });
    CHECK(star_total == sum_eigenvector_counts_star(2, 3));

    CHECK_THROWS_AS(count_eigenvectors(Permutation::identity(30), 2, false), cap_refusal);
    CHECK_THROWS_AS(count_eigenvectors(Permutation::identity(2), 4, false), parameter_error);
}

TEST_CASE("census sums match brute force on a small grid", "[oracle]") {
    for (long long q : {2, 3, 5}) {
        for (unsigned m = 1; m <= 4; ++m) {
            Int total = 0, star = 0;
            for_each_permutation(m, [&](const std::vector<std::uint32_t>& im) {
                const Permutation sigma(im);
                total += count_eigenvectors(sigma, q, false);
                if (static_cast<long long>(m) <= q - 1)
                    star += count_eigenvectors(sigma, q, true);
            });
            CHECK(total == sum_eigenvector_counts(m, q));
            if (static_cast<long long>(m) <= q - 1) CHECK(star == sum_eigenvector_counts_star(m, q));
        }
    }
}

TEST_CASE("cycle identity checks", "[oracle]") {
    // d = 1 counts every cycle on both sides
    CHECK(check_cycle_identity(4, 5, 1));
    CHECK(check_cycle_identity(5, 3, 1));
    // two-permutation hand enumeration: 1 + q = 4 = 2 C(2, 1) at q=3, d=2
    CHECK(check_cycle_identity(2, 3, 2));
    CHECK(check_cycle_identity(4, 5, 4));
    CHECK_THROWS_AS(check_cycle_identity(3, 7, 4), parameter_error); // d does not divide q-1
    CHECK_THROWS_AS(check_cycle_identity(9, 3, 2), cap_refusal);
}

TEST_CASE("monte carlo report", "[oracle]") {
    const ParameterSet p{7, 2, 5, 1, Variant::ipkp};
    CHECK_THROWS_AS(monte_carlo_expectation(p, 0, 1), parameter_error);
    CHECK_THROWS_AS(monte_carlo_expectation(p, 99, 1), parameter_error);

    const auto r = monte_carlo_expectation(p, 4000, 123);
    CHECK(r.samples == 4000);
    CHECK(r.exact_reference == expected_ipkp(p));
    CHECK(std::abs(r.z_score) <= 4.0);
    CHECK(r.pass);
    // mean is the exact rational sum/samples
    CHECK(denominator(r.mean) <= 4000);

    // identical seeds reproduce the identical report
    const auto r2 = monte_carlo_expectation(p, 4000, 123);
    CHECK(r2.mean == r.mean);
    CHECK(r2.variance_estimate == r.variance_estimate);
    CHECK(r2.z_score == r.z_score);

    CHECK_THROWS_AS(
        monte_carlo_expectation(ParameterSet{2, 1, 14, 1, Variant::ipkp}, 500, 1),
        cap_refusal);
}
