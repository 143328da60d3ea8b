#pragma once

/**
 * Exact expected solution counts for random instances of the four problem
 * variants, plus the supporting probability and counting results they are
 * assembled from. Everything is evaluated in exact rational arithmetic;
 * decimal output is rendering only.
 *
 * expected_ipkp           -- any n >= 1, instances from gen_ipkp
 * expected_ipkp_star_mono -- n = 1, instances from gen_ipkp_star
 * expected_pkp_mono       -- n = 1, instances from gen_pkp
 * expected_pkp_star_mono  -- n = 1, instances from gen_pkp_star
 *
 * Each function enforces exactly the hypotheses under which its formula is
 * proven, nothing stronger. evaluate() offers an escape hatch that computes
 * the expression outside those hypotheses and labels the result.
 */

#include <numeric>
#include <optional>
#include <string>

#include "pkp/errors.hpp"
#include "pkp/exactnum.hpp"
#include "pkp/params.hpp"

namespace pkp {

/// The classical estimate m! / q^(ell * n).
inline Rat heuristic_expectation(const ParameterSet& p) {
    p.validate();
    return make_rational(factorial(p.m),
                         pow_int(Int(p.q), static_cast<std::uint64_t>(p.ell) * p.n));
}

namespace detail {

// Sum over the whole formula with the common denominator
// |rank-ell class of ell x m| * prod_{i<n}(q^m - q^i), so the loop is pure
// integer arithmetic and normalizes once at the end.
inline Rat eval_ipkp_formula(long long q, unsigned ell, unsigned m, unsigned n) {
    const Int Q = q;
    const std::vector<Int> stirling = stirling1_row(m);
    Int denom = rank_count(ell, m, ell, q);
    for (unsigned i = 0; i < n; ++i) denom *= pow_int(Q, m) - pow_int(Q, i);

    Int total = 0;
    for (unsigned k = 1; k <= m; ++k) {
        const unsigned rmax = std::min(ell, m - k);
        for (unsigned r = 0; r <= rmax; ++r) {
            Int term = stirling[k] * rank_count(ell, m - k, r, q) *
                       rank_count(ell - r, k, ell - r, q) *
                       pow_int(Q, static_cast<std::uint64_t>(k) * r);
            for (unsigned i = 0; i < n; ++i) term *= pow_int(Q, m - r) - pow_int(Q, i);
            total += term;
        }
    }
    return make_rational(total, denom);
}

inline Rat eval_ipkp_star_mono_formula(long long q, unsigned ell, unsigned m) {
    const Int Q = q;
    return 1 + make_rational((factorial(m) - 1) * (pow_int(Q, m - ell) - 1),
                             pow_int(Q, m) - 1);
}

inline Int sum_eigenvector_count(unsigned m, long long q) {
    Int inner = 0;
    for (std::uint64_t d : divisors(static_cast<std::uint64_t>(q - 1)))
        inner += Int(euler_phi(d)) * binomial((q + m - 1) / d, m / d);
    return factorial(m) * (inner - q + 1);
}

inline Int sum_eigenvector_count_star(unsigned m, long long q) {
    const std::uint64_t g = std::gcd<std::uint64_t>(q - 1, m);
    Int inner = 0;
    for (std::uint64_t d : divisors(g))
        inner += Int(euler_phi(d)) * binomial((q - 1) / d, m / d);
    return factorial(m) * inner;
}

inline Rat eval_pkp_mono_formula(long long q, unsigned ell, unsigned m) {
    const Int Q = q;
    const Int qm = pow_int(Q, m);
    const Int qml = pow_int(Q, m - ell);
    const Rat first = make_rational(factorial(m) * (qml - Q), qm - Q);
    const Rat second =
        make_rational(qm - qml, (qm - 1) * (qm - Q)) * Rat(sum_eigenvector_count(m, q));
    return first + second;
}

inline Rat eval_pkp_star_mono_formula(long long q, unsigned ell, unsigned m) {
    const Int Q = q;
    const Int qm = pow_int(Q, m);
    const Int qml = pow_int(Q, m - ell);
    const Rat first = make_rational(factorial(m) * (qml - Q), qm - Q);
    const Rat second =
        make_rational((qm - qml) * sum_eigenvector_count_star(m, q),
                      (qm - Q) * binomial(q - 1, m) * factorial(m));
    return first + second;
}

} // namespace detail

/// Exact E[number of solutions] for gen_ipkp instances, any n >= 1.
/// Hypotheses: max(ell, n) <= m.
inline Rat expected_ipkp(const ParameterSet& p) {
    if (p.q < 2) throw parameter_error("expected_ipkp: q must be >= 2");
    if (p.ell < 1 || p.m < 1 || p.n < 1)
        throw parameter_error("expected_ipkp: ell, m, n must be >= 1");
    if (p.ell > p.m || p.n > p.m)
        throw parameter_error("expected_ipkp: hypothesis max(ell, n) <= m violated");
    return detail::eval_ipkp_formula(p.q, p.ell, p.m, p.n);
}

/// Exact E[number of solutions] for gen_ipkp_star instances with n = 1:
/// 1 + (m! - 1)(q^(m-ell) - 1)/(q^m - 1). Hypotheses: ell <= m < q, n = 1.
inline Rat expected_ipkp_star_mono(const ParameterSet& p) {
    if (p.q < 2) throw parameter_error("expected_ipkp_star_mono: q must be >= 2");
    if (p.n != 1)
        throw parameter_error("expected_ipkp_star_mono: only n = 1 has an exact formula");
    if (!(p.ell >= 1 && p.ell <= p.m && static_cast<long long>(p.m) < p.q))
        throw parameter_error("expected_ipkp_star_mono: hypothesis ell <= m < q violated");
    return detail::eval_ipkp_star_mono_formula(p.q, p.ell, p.m);
}

/// Exact E[number of solutions] for gen_pkp instances with n = 1.
/// Hypotheses: 0 < ell < m, n = 1.
inline Rat expected_pkp_mono(const ParameterSet& p) {
    if (p.q < 2) throw parameter_error("expected_pkp_mono: q must be >= 2");
    if (p.n != 1)
        throw parameter_error("expected_pkp_mono: only n = 1 has an exact formula");
    if (!(p.ell >= 1 && p.ell < p.m))
        throw parameter_error("expected_pkp_mono: hypothesis 0 < ell < m violated");
    return detail::eval_pkp_mono_formula(p.q, p.ell, p.m);
}

/// Exact E[number of solutions] for gen_pkp_star instances with n = 1.
/// Hypotheses: 0 < ell < m < q, n = 1.
inline Rat expected_pkp_star_mono(const ParameterSet& p) {
    if (p.q < 2) throw parameter_error("expected_pkp_star_mono: q must be >= 2");
    if (p.n != 1)
        throw parameter_error("expected_pkp_star_mono: only n = 1 has an exact formula");
    if (!(p.ell >= 1 && p.ell < p.m && static_cast<long long>(p.m) < p.q))
        throw parameter_error("expected_pkp_star_mono: hypothesis 0 < ell < m < q violated");
    return detail::eval_pkp_star_mono_formula(p.q, p.ell, p.m);
}

// ---------------------------------------------------------------------------
// Supporting probabilities and counts
// ---------------------------------------------------------------------------

/// P[rank of the first m1 columns = r] for a uniform full-rank
/// ell x (m1 + m2) matrix. Requires ell <= m1 + m2 and 0 <= r <= min(ell, m1).
inline Rat prob_block_rank(unsigned ell, unsigned m1, unsigned m2, unsigned r, long long q) {
    if (q < 2) throw parameter_error("prob_block_rank: q must be >= 2");
    if (ell > m1 + m2)
        throw parameter_error("prob_block_rank: need ell <= m1 + m2");
    if (r > std::min(ell, m1))
        throw parameter_error("prob_block_rank: need r <= min(ell, m1)");
    return make_rational(rank_count(ell, m1, r, q) * rank_count(ell - r, m2, ell - r, q) *
                             pow_int(Int(q), static_cast<std::uint64_t>(m2) * r),
                         rank_count(ell, m1 + m2, ell, q));
}

enum class ZeroProductForm {
    am,  ///< P[A M = 0],   A uniform full-rank ell x m
    mb,  ///< P[M B = 0],   B uniform rank-n m' x n
    amb, ///< P[A M B = 0], A and B independent as above
};

/// Exact probability that a product through a fixed rank-s matrix M
/// (m x m') vanishes, for uniformly random full-rank A (ell x m) and/or
/// B (m' x n). The value depends on M only through s.
inline Rat prob_zero_product(unsigned ell, unsigned m, unsigned mprime, unsigned n,
                             unsigned s, long long q, ZeroProductForm form) {
    if (q < 2) throw parameter_error("prob_zero_product: q must be >= 2");
    if (s > std::min(m, mprime))
        throw parameter_error("prob_zero_product: need s <= min(m, m')");
    if (ell > m) throw parameter_error("prob_zero_product: need ell <= m");
    if (n > mprime) throw parameter_error("prob_zero_product: need n <= m'");
    const Int Q = q;
    switch (form) {
        case ZeroProductForm::am: {
            Rat prob = 1;
            for (unsigned i = 0; i < ell; ++i)
                prob *= make_rational(pow_int(Q, m - s) - pow_int(Q, i),
                                      pow_int(Q, m) - pow_int(Q, i));
            return prob;
        }
        case ZeroProductForm::mb: {
            Rat prob = 1;
            for (unsigned i = 0; i < n; ++i)
                prob *= make_rational(pow_int(Q, mprime - s) - pow_int(Q, i),
                                      pow_int(Q, mprime) - pow_int(Q, i));
            return prob;
        }
        case ZeroProductForm::amb: {
            Rat total = 0;
            for (unsigned r = 0; r <= std::min(ell, s); ++r) {
                Rat term = make_rational(
                    rank_count(ell, s, r, q) * rank_count(ell - r, m - s, ell - r, q) *
                        pow_int(Q, static_cast<std::uint64_t>(m - s) * r),
                    rank_count(ell, m, ell, q));
                for (unsigned i = 0; i < n; ++i)
                    term *= make_rational(pow_int(Q, mprime - r) - pow_int(Q, i),
                                          pow_int(Q, mprime) - pow_int(Q, i));
                total += term;
            }
            return total;
        }
    }
    throw internal_error("prob_zero_product: bad form");
}

/// Total count, over all permutations sigma of m elements, of the nonzero
/// vectors that sigma's matrix scales by some nonzero field element:
/// m! (sum_{d | q-1} phi(d) C(floor((q+m-1)/d), floor(m/d)) - q + 1).
inline Int sum_eigenvector_counts(unsigned m, long long q) {
    if (m < 1) throw parameter_error("sum_eigenvector_counts: m must be >= 1");
    if (q < 2) throw parameter_error("sum_eigenvector_counts: q must be >= 2");
    return detail::sum_eigenvector_count(m, q);
}

/// Same count restricted to vectors with pairwise distinct nonzero entries:
/// m! sum_{d | gcd(q-1, m)} phi(d) C((q-1)/d, m/d). Requires m <= q - 1
/// (otherwise no such vectors exist).
inline Int sum_eigenvector_counts_star(unsigned m, long long q) {
    if (m < 1) throw parameter_error("sum_eigenvector_counts_star: m must be >= 1");
    if (q < 2) throw parameter_error("sum_eigenvector_counts_star: q must be >= 2");
    if (static_cast<long long>(m) > q - 1)
        throw parameter_error("sum_eigenvector_counts_star: need m <= q - 1");
    return detail::sum_eigenvector_count_star(m, q);
}

/// Whether sum_{d | gcd(q-1,m)} phi(d) C((q-1)/d, m/d) < 3 C(q-1, m).
/// Requires 1 <= m <= q - 2; always true in that range.
inline bool check_star_census_bound(unsigned m, long long q) {
    if (m < 1 || static_cast<long long>(m) > q - 2)
        throw parameter_error("check_star_census_bound: need 1 <= m <= q - 2");
    const Rat lhs(detail::sum_eigenvector_count_star(m, q), factorial(m));
    return lhs < Rat(3) * Rat(binomial(q - 1, m));
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct ExpectationReport {
    ParameterSet params;
    Rat exact;           ///< E[number of solutions], the secret included
    Rat exact_minus_one; ///< expected number of solutions other than the secret
    Rat heuristic;       ///< m! / q^(ell n)
    Rat ratio;           ///< exact_minus_one / heuristic
    bool outside_validity = false; ///< formula evaluated beyond its hypotheses
};

struct EvalOptions {
    bool allow_outside = false; ///< evaluate outside the proven hypotheses, flagging the report
};

/// Error message if the proven formula matching the variant does not cover these
/// parameters, std::nullopt when it does.
inline std::optional<std::string> formula_precondition_violation(const ParameterSet& p) {
    try {
        switch (p.variant) {
            case Variant::ipkp: (void)expected_ipkp(p); break;
            case Variant::ipkp_star: (void)expected_ipkp_star_mono(p); break;
            case Variant::pkp: (void)expected_pkp_mono(p); break;
            case Variant::pkp_star: (void)expected_pkp_star_mono(p); break;
        }
    } catch (const parameter_error& e) {
        return e.what();
    }
    return std::nullopt;
}

/// Evaluate the exact formula matching params.variant and assemble the
/// report. With allow_outside, hypotheses violations do not throw; the
/// expression is evaluated as written and the report is labeled, except
/// where the expression itself is undefined (n > 1 for the monodimensional
/// formulas; m = 1 for the homogeneous ones, where q^m - q vanishes).
inline ExpectationReport evaluate(const ParameterSet& p, const EvalOptions& opts = {}) {
    if (p.q < 2) throw parameter_error("evaluate: q must be >= 2");
    if (p.ell < 1 || p.m < 1 || p.n < 1)
        throw parameter_error("evaluate: ell, m, n must be >= 1");

    const auto violation = formula_precondition_violation(p);
    if (violation && !opts.allow_outside) throw parameter_error(*violation);

    // Even outside the hypotheses the expression must stay defined.
    if (p.variant != Variant::ipkp && p.n != 1)
        throw parameter_error(std::string("no exact formula is known for n > 1 with ") +
                              to_string(p.variant) +
                              "; only the ipkp variant supports n > 1");
    if (p.ell > p.m)
        throw parameter_error("the formulas are undefined for ell > m");
    if (p.n > p.m)
        throw parameter_error("the formulas are undefined for n > m");
    if (p.homogeneous() && p.m < 2)
        throw parameter_error("the homogeneous formulas are undefined for m = 1");
    if (p.variant == Variant::pkp_star && static_cast<long long>(p.m) > p.q - 1)
        throw parameter_error("the pkp_star formula is undefined for m > q - 1");

    Rat exact;
    switch (p.variant) {
        case Variant::ipkp: exact = detail::eval_ipkp_formula(p.q, p.ell, p.m, p.n); break;
        case Variant::ipkp_star:
            exact = detail::eval_ipkp_star_mono_formula(p.q, p.ell, p.m);
            break;
        case Variant::pkp: exact = detail::eval_pkp_mono_formula(p.q, p.ell, p.m); break;
        case Variant::pkp_star:
            exact = detail::eval_pkp_star_mono_formula(p.q, p.ell, p.m);
            break;
    }
    ExpectationReport report;
    report.params = p;
    report.exact = exact;
    report.exact_minus_one = exact - 1;
    report.heuristic = make_rational(factorial(p.m),
                                     pow_int(Int(p.q), static_cast<std::uint64_t>(p.ell) * p.n));
    report.ratio = report.exact_minus_one / report.heuristic;
    report.outside_validity = violation.has_value();
    return report;
}

} // namespace pkp
