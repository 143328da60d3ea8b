#pragma once

/**
 * Independent ground truth for the closed-form expectations: exact solution
 * counting by permutation enumeration, exhaustive averages over entire
 * instance spaces, eigenvector censuses, and seeded Monte Carlo estimation
 * with a z-score comparison.
 *
 * Everything here is deliberately exhaustive; there is no solving algorithm
 * smarter than enumeration. Costs are guarded by explicit caps that refuse
 * (with the estimated size) rather than run away.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pkp/errors.hpp"
#include "pkp/exactnum.hpp"
#include "pkp/expectation.hpp"
#include "pkp/generators.hpp"
#include "pkp/linalg.hpp"
#include "pkp/sampling.hpp"

namespace pkp {

inline constexpr unsigned kCountSolutionsCapDefault = 12;     // max m for m! enumeration
inline constexpr std::uint64_t kExhaustiveCapDefault = 10'000'000;  // weighted points
inline constexpr std::uint64_t kVectorScanCapDefault = 10'000'000;  // q^m vectors
inline constexpr unsigned kCycleIdentityCapDefault = 8;       // max m for S_m scan

// ---------------------------------------------------------------------------
// Enumeration helpers
// ---------------------------------------------------------------------------

/// Calls f(matrix) for every matrix in F_q^{rows x cols}, in odometer order.
template <class F>
void for_each_matrix(unsigned rows, unsigned cols, long long q, F&& f) {
    FqMatrix X(rows, cols, q);
    auto& e = X.entries();
    if (e.empty()) {
        f(static_cast<const FqMatrix&>(X));
        return;
    }
    for (;;) {
        f(static_cast<const FqMatrix&>(X));
        std::size_t i = 0;
        while (i < e.size()) {
            if (++e[i] < static_cast<std::uint32_t>(q)) break;
            e[i] = 0;
            ++i;
        }
        if (i == e.size()) return;
    }
}

/// Calls f(images) for every permutation of {0..m-1}, lexicographically.
template <class F>
void for_each_permutation(unsigned m, F&& f) {
    std::vector<std::uint32_t> images(m);
    std::iota(images.begin(), images.end(), 0u);
    do {
        f(static_cast<const std::vector<std::uint32_t>&>(images));
    } while (std::next_permutation(images.begin(), images.end()));
}

namespace detail {

// A set of same-shape matrices stored back to back.
struct MatrixClass {
    unsigned rows = 0, cols = 0;
    long long q = 2;
    std::vector<std::uint32_t> flat;

    std::size_t size() const {
        const std::size_t cell = static_cast<std::size_t>(rows) * cols;
        return cell == 0 ? 0 : flat.size() / cell;
    }
    const std::uint32_t* operator[](std::size_t i) const {
        return flat.data() + i * static_cast<std::size_t>(rows) * cols;
    }
    FqMatrix materialize(std::size_t i) const {
        const std::size_t cell = static_cast<std::size_t>(rows) * cols;
        return FqMatrix(rows, cols, q,
                        std::vector<std::uint32_t>(flat.begin() + i * cell,
                                                   flat.begin() + (i + 1) * cell));
    }
};

template <class Pred>
MatrixClass collect_matrices(unsigned rows, unsigned cols, long long q, Pred&& keep) {
    MatrixClass out;
    out.rows = rows;
    out.cols = cols;
    out.q = q;
    for_each_matrix(rows, cols, q, [&](const FqMatrix& X) {
        if (keep(X))
            out.flat.insert(out.flat.end(), X.entries().begin(), X.entries().end());
    });
    return out;
}

inline bool has_distinct_nonzero_rows(const FqMatrix& X) {
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(X.rows());
    for (unsigned i = 0; i < X.rows(); ++i) {
        std::vector<std::uint32_t> row(X.cols());
        bool zero = true;
        for (unsigned j = 0; j < X.cols(); ++j) {
            row[j] = X.at(i, j);
            zero = zero && row[j] == 0;
        }
        if (zero) return false;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    return std::adjacent_find(rows.begin(), rows.end()) == rows.end();
}

// The class B is drawn from: rank-n, or star (distinct nonzero rows, rank n).
inline MatrixClass collect_b_class(const ParameterSet& p) {
    if (p.star())
        return collect_matrices(p.m, p.n, p.q, [&](const FqMatrix& X) {
            return has_distinct_nonzero_rows(X) && rank(X) == p.n;
        });
    return collect_matrices(p.m, p.n, p.q,
                            [&](const FqMatrix& X) { return rank(X) == p.n; });
}

// Z (ell x n) = A (ell x m) * P (m x n), flattened row-major, entries mod q.
inline void mul_flat(const std::uint32_t* A, const std::uint32_t* P, std::uint32_t* Z,
                     unsigned ell, unsigned m, unsigned n, std::uint64_t q) {
    for (unsigned i = 0; i < ell; ++i)
        for (unsigned j = 0; j < n; ++j) {
            std::uint64_t acc = 0;
            for (unsigned k = 0; k < m; ++k)
                acc = (acc + static_cast<std::uint64_t>(A[i * m + k]) * P[k * n + j]) % q;
            Z[i * n + j] = static_cast<std::uint32_t>(acc);
        }
}

inline bool product_is_zero(const std::uint32_t* A, const std::uint32_t* P,
                            unsigned ell, unsigned m, unsigned n, std::uint64_t q) {
    for (unsigned i = 0; i < ell; ++i)
        for (unsigned j = 0; j < n; ++j) {
            std::uint64_t acc = 0;
            for (unsigned k = 0; k < m; ++k)
                acc = (acc + static_cast<std::uint64_t>(A[i * m + k]) * P[k * n + j]) % q;
            if (acc != 0) return false;
        }
    return true;
}

inline std::uint64_t checked_pow_cost(long long q, std::uint64_t exp, Int cap,
                                      const char* who) {
    const Int cost = pow_int(Int(q), exp);
    if (cost > cap)
        throw cap_refusal(std::string(who) + ": enumeration space has " + cost.str() +
                          " points (cap " + cap.str() + ")");
    return cost.convert_to<std::uint64_t>();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Solution counting
// ---------------------------------------------------------------------------

struct SolutionCount {
    std::uint64_t n_sol = 0;   ///< permutations rho with A rho B = C
    Int enumerated = 1;        ///< search-space size m!
    bool contains_secret = false;
};

/// Exact solution count by lexicographic enumeration of all m! permutations,
/// with partial products shared along common prefixes. The sharing cannot
/// change the count; count_solutions_reference is the plain path kept for
/// differential testing.
inline SolutionCount count_solutions(const IpkpInstance& inst,
                                     unsigned cap = kCountSolutionsCapDefault) {
    const unsigned m = inst.params.m, ell = inst.params.ell, n = inst.params.n;
    if (m > cap)
        throw cap_refusal(
            "count_solutions: m = " + std::to_string(m) + " exceeds cap " +
            std::to_string(cap) + " (cost is m! * ell * m * n = " +
            (factorial(m) * ell * m * n).str() + " products)");
    const std::uint64_t q = static_cast<std::uint64_t>(inst.params.q);
    const std::size_t cell = static_cast<std::size_t>(ell) * n;

    // partial[d] = sum over the first d assigned positions of
    // (column i of A) x (row rho(i) of B).
    std::vector<std::uint32_t> partial((m + 1) * cell, 0);
    std::vector<bool> used(m, false);
    std::uint64_t count = 0;

    auto descend = [&](auto&& self, unsigned depth) -> void {
        if (depth == m) {
            const std::uint32_t* s = partial.data() + depth * cell;
            for (unsigned i = 0; i < ell; ++i)
                for (unsigned j = 0; j < n; ++j)
                    if (s[i * n + j] != inst.C.at(i, j)) return;
            ++count;
            return;
        }
        for (unsigned j = 0; j < m; ++j) {
            if (used[j]) continue;
            used[j] = true;
            const std::uint32_t* src = partial.data() + depth * cell;
            std::uint32_t* dst = partial.data() + (depth + 1) * cell;
            for (unsigned i = 0; i < ell; ++i) {
                const std::uint64_t a = inst.A.at(i, depth);
                for (unsigned c = 0; c < n; ++c)
                    dst[i * n + c] = static_cast<std::uint32_t>(
                        (src[i * n + c] + a * inst.B.at(j, c)) % q);
            }
            self(self, depth + 1);
            used[j] = false;
        }
    };
    descend(descend, 0);

    SolutionCount out;
    out.n_sol = count;
    out.enumerated = factorial(m);
    out.contains_secret =
        inst.secret && mat_mul(inst.A, permute_rows(*inst.secret, inst.B)) == inst.C;
    return out;
}

inline SolutionCount count_solutions(const PkpInstance& inst,
                                     unsigned cap = kCountSolutionsCapDefault) {
    return count_solutions(inst.as_ipkp(), cap);
}

/// No-sharing reference: every permutation recomputes the full product.
inline SolutionCount count_solutions_reference(const IpkpInstance& inst,
                                               unsigned cap = kCountSolutionsCapDefault) {
    const unsigned m = inst.params.m;
    if (m > cap)
        throw cap_refusal("count_solutions_reference: m = " + std::to_string(m) +
                          " exceeds cap " + std::to_string(cap));
    std::uint64_t count = 0;
    for_each_permutation(m, [&](const std::vector<std::uint32_t>& images) {
        const Permutation rho(images);
        if (mat_mul(inst.A, permute_rows(rho, inst.B)) == inst.C) ++count;
    });
    SolutionCount out;
    out.n_sol = count;
    out.enumerated = factorial(m);
    out.contains_secret =
        inst.secret && mat_mul(inst.A, permute_rows(*inst.secret, inst.B)) == inst.C;
    return out;
}

inline SolutionCount count_solutions_reference(const PkpInstance& inst,
                                               unsigned cap = kCountSolutionsCapDefault) {
    return count_solutions_reference(inst.as_ipkp(), cap);
}

// ---------------------------------------------------------------------------
// Exhaustive expectation over the whole instance space
// ---------------------------------------------------------------------------

/// Exact E[number of solutions] by enumerating the generator's entire output
/// distribution: every (A, B, pi) for the inhomogeneous variants, every
/// (B, pi, M) with A = M K for the homogeneous ones. All points are
/// equiprobable under the matching generator, so the expectation is the
/// plain average, returned as an exact rational.
inline Rat exhaustive_expectation(const ParameterSet& p,
                                  std::uint64_t cap = kExhaustiveCapDefault) {
    p.validate();
    p.require_prime_q();
    const unsigned ell = p.ell, m = p.m, n = p.n;
    const std::uint64_t q = static_cast<std::uint64_t>(p.q);

    // Guard the raw matrix-space scans before touching them.
    detail::checked_pow_cost(p.q, static_cast<std::uint64_t>(m) * n, Int(16) * cap,
                             "exhaustive_expectation (B scan)");
    const detail::MatrixClass bclass = detail::collect_b_class(p);

    // All m! permutations as image vectors, lexicographic.
    std::vector<std::vector<std::uint32_t>> perms;
    for_each_permutation(m, [&](const std::vector<std::uint32_t>& im) { perms.push_back(im); });
    const std::size_t nperm = perms.size();

    // Scratch: mat(rho) * B for all rho, flattened, rebuilt per B.
    std::vector<std::uint32_t> pb(nperm * m * n);
    auto fill_pb = [&](const std::uint32_t* B) {
        for (std::size_t t = 0; t < nperm; ++t)
            for (unsigned i = 0; i < m; ++i)
                for (unsigned j = 0; j < n; ++j)
                    pb[(t * m + i) * n + j] = B[perms[t][i] * n + j];
    };

    Int total = 0;
    Int weighted_points;

    if (!p.homogeneous()) {
        const Int a_count = rank_count(ell, m, ell, p.q);
        weighted_points = a_count * bclass.size() * factorial(m);
        if (weighted_points > cap)
            throw cap_refusal("exhaustive_expectation: instance space has " +
                              weighted_points.str() + " weighted points (cap " +
                              std::to_string(cap) + ")");
        detail::checked_pow_cost(p.q, static_cast<std::uint64_t>(ell) * m, Int(16) * cap,
                                 "exhaustive_expectation (A scan)");
        const detail::MatrixClass aclass = detail::collect_matrices(
            ell, m, p.q, [&](const FqMatrix& X) { return rank(X) == ell; });
        if (Int(aclass.size()) != a_count)
            throw internal_error("exhaustive_expectation: rank census mismatch");

        // Sum over (A, B) of sum over (pi, rho) of [A rho B = A pi B]; the
        // inner double sum groups the m! product values by equality.
        const std::size_t cell = static_cast<std::size_t>(ell) * n;
        std::vector<std::uint32_t> v(nperm * cell);
        for (std::size_t bi = 0; bi < bclass.size(); ++bi) {
            fill_pb(bclass[bi]);
            std::uint64_t chunk = 0;
            for (std::size_t ai = 0; ai < aclass.size(); ++ai) {
                const std::uint32_t* A = aclass[ai];
                for (std::size_t t = 0; t < nperm; ++t)
                    detail::mul_flat(A, pb.data() + t * m * n, v.data() + t * cell,
                                     ell, m, n, q);
                for (std::size_t t = 0; t < nperm; ++t)
                    for (std::size_t u = 0; u < nperm; ++u)
                        chunk += std::equal(v.begin() + t * cell, v.begin() + (t + 1) * cell,
                                            v.begin() + u * cell);
            }
            total += chunk;
        }
    } else {
        const Int m_count = rank_count(ell, m - n, ell, p.q);
        weighted_points = m_count * bclass.size() * factorial(m);
        if (weighted_points > cap)
            throw cap_refusal("exhaustive_expectation: instance space has " +
                              weighted_points.str() + " weighted points (cap " +
                              std::to_string(cap) + ")");
        detail::checked_pow_cost(p.q, static_cast<std::uint64_t>(ell) * (m - n), Int(16) * cap,
                                 "exhaustive_expectation (M scan)");
        const detail::MatrixClass mclass = detail::collect_matrices(
            ell, m - n, p.q, [&](const FqMatrix& X) { return rank(X) == ell; });
        if (Int(mclass.size()) != m_count)
            throw internal_error("exhaustive_expectation: rank census mismatch");

        // For fixed (B, pi): A = M K with K the left kernel basis of pi * B;
        // rho solves iff M (K rho B) = 0. The count of class members
        // annihilating a given w depends only on the value of w, so when the
        // w-space is small we tabulate it with one scan of the class per
        // value instead of rescanning per (B, pi, rho).
        const std::size_t wcell = static_cast<std::size_t>(m - n) * n;
        std::vector<std::uint32_t> w(nperm * wcell);

        std::vector<std::uint64_t> zero_hits; // index: w encoded base q
        const Int w_space = pow_int(Int(p.q), wcell);
        if (w_space <= 1u << 20) {
            zero_hits.assign(w_space.convert_to<std::size_t>(), 0);
            std::vector<std::uint32_t> wv(wcell, 0);
            for (std::size_t idx = 0; idx < zero_hits.size(); ++idx) {
                std::uint64_t hits = 0;
                for (std::size_t mi = 0; mi < mclass.size(); ++mi)
                    hits += detail::product_is_zero(mclass[mi], wv.data(), ell, m - n, n, q);
                zero_hits[idx] = hits;
                for (std::size_t c = 0; c < wcell; ++c) { // odometer, low digit first
                    if (++wv[c] < q) break;
                    wv[c] = 0;
                }
            }
        }
        auto encode_w = [&](const std::uint32_t* wv) {
            std::size_t idx = 0;
            for (std::size_t c = wcell; c-- > 0;) idx = idx * q + wv[c];
            return idx;
        };

        for (std::size_t bi = 0; bi < bclass.size(); ++bi) {
            const FqMatrix B = bclass.materialize(bi);
            fill_pb(bclass[bi]);
            std::uint64_t chunk = 0;
            for (std::size_t pi_idx = 0; pi_idx < nperm; ++pi_idx) {
                const FqMatrix K =
                    left_kernel_basis(permute_rows(Permutation(perms[pi_idx]), B));
                for (std::size_t t = 0; t < nperm; ++t)
                    detail::mul_flat(K.entries().data(), pb.data() + t * m * n,
                                     w.data() + t * wcell, m - n, m, n, q);
                if (!zero_hits.empty()) {
                    for (std::size_t t = 0; t < nperm; ++t)
                        chunk += zero_hits[encode_w(w.data() + t * wcell)];
                } else {
                    for (std::size_t mi = 0; mi < mclass.size(); ++mi)
                        for (std::size_t t = 0; t < nperm; ++t)
                            chunk += detail::product_is_zero(mclass[mi], w.data() + t * wcell,
                                                             ell, m - n, n, q);
                }
            }
            total += chunk;
        }
    }
    return make_rational(total, weighted_points);
}

/// Second, independent route for the homogeneous variants: instead of the
/// kernel-coefficient space, enumerate directly all full-rank A with
/// A pi B = 0 for each (B, pi). Intended for tiny parameters only.
inline Rat exhaustive_expectation_pkp_direct(const ParameterSet& p,
                                             std::uint64_t cap = kExhaustiveCapDefault) {
    p.validate();
    p.require_prime_q();
    if (!p.homogeneous())
        throw parameter_error("exhaustive_expectation_pkp_direct: homogeneous variants only");
    const unsigned ell = p.ell, m = p.m, n = p.n;
    const std::uint64_t q = static_cast<std::uint64_t>(p.q);

    detail::checked_pow_cost(p.q, static_cast<std::uint64_t>(m) * n, Int(16) * cap,
                             "exhaustive_expectation_pkp_direct (B scan)");
    const detail::MatrixClass bclass = detail::collect_b_class(p);
    const Int a_cond_count = rank_count(ell, m - n, ell, p.q);
    const Int weighted_points = a_cond_count * bclass.size() * factorial(m);
    if (weighted_points > cap)
        throw cap_refusal("exhaustive_expectation_pkp_direct: instance space has " +
                          weighted_points.str() + " weighted points (cap " +
                          std::to_string(cap) + ")");
    // The A scan repeats per (B, pi); budget it against the same cap.
    const std::uint64_t a_scan = detail::checked_pow_cost(
        p.q, static_cast<std::uint64_t>(ell) * m, Int(16) * cap,
        "exhaustive_expectation_pkp_direct (A scan)");
    (void)a_scan;

    std::vector<std::vector<std::uint32_t>> perms;
    for_each_permutation(m, [&](const std::vector<std::uint32_t>& im) { perms.push_back(im); });

    Int total = 0;
    for (std::size_t bi = 0; bi < bclass.size(); ++bi) {
        const FqMatrix B = bclass.materialize(bi);
        for (const auto& pi_images : perms) {
            const FqMatrix PB = permute_rows(Permutation(pi_images), B);
            Int conditional = 0;
            std::uint64_t chunk = 0;
            for_each_matrix(ell, m, p.q, [&](const FqMatrix& A) {
                if (rank(A) != ell) return;
                if (!detail::product_is_zero(A.entries().data(), PB.entries().data(),
                                             ell, m, n, q))
                    return;
                ++conditional;
                for (const auto& rho : perms) {
                    bool zero = true;
                    for (unsigned i = 0; i < ell && zero; ++i)
                        for (unsigned j = 0; j < n && zero; ++j) {
                            std::uint64_t acc = 0;
                            for (unsigned k = 0; k < m; ++k)
                                acc = (acc + static_cast<std::uint64_t>(A.at(i, k)) *
                                                 B.at(rho[k], j)) % q;
                            zero = acc == 0;
                        }
                    chunk += zero;
                }
            });
            if (conditional != a_cond_count)
                throw internal_error(
                    "exhaustive_expectation_pkp_direct: conditional A count mismatch");
            total += chunk;
        }
    }
    return make_rational(total, weighted_points);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

struct MonteCarloReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    Rat mean;              ///< exact sample mean of the solution count
    Rat variance_estimate; ///< unbiased sample variance, exact
    Rat exact_reference;   ///< the matching closed-form expectation
    double z_score = 0.0;  ///< (mean - exact) / standard error
    bool pass = true;      ///< |z| <= 4
};

/// Draw `samples` instances with the generator matching params.variant,
/// count the solutions of each, and compare the sample mean against the
/// closed form via a z-score.
inline MonteCarloReport monte_carlo_expectation(const ParameterSet& p,
                                                std::uint64_t samples, std::uint64_t seed,
                                                unsigned count_cap = kCountSolutionsCapDefault) {
    p.validate();
    p.require_prime_q();
    if (samples < 100)
        throw parameter_error("monte_carlo_expectation: need samples >= 100");
    if (p.m > count_cap)
        throw cap_refusal("monte_carlo_expectation: m = " + std::to_string(p.m) +
                          " exceeds the solution-count cap " + std::to_string(count_cap));

    const Rat exact = evaluate(p).exact;
    SeededRng rng(seed);
    Int sum = 0, sum_sq = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Instance inst = generate(p, rng);
        const std::uint64_t n_sol = std::visit(
            [&](const auto& x) { return count_solutions(x, count_cap).n_sol; }, inst);
        sum += n_sol;
        sum_sq += Int(n_sol) * n_sol;
    }

    MonteCarloReport report;
    report.samples = samples;
    report.seed = seed;
    report.mean = make_rational(sum, Int(samples));
    report.variance_estimate = make_rational(Int(samples) * sum_sq - sum * sum,
                                             Int(samples) * (Int(samples) - 1));
    report.exact_reference = exact;
    const Rat diff = report.mean - exact;
    if (report.variance_estimate == 0) {
        report.z_score = diff == 0 ? 0.0
                                   : (diff > 0 ? std::numeric_limits<double>::infinity()
                                               : -std::numeric_limits<double>::infinity());
    } else {
        const double se = std::sqrt(report.variance_estimate.convert_to<double>() /
                                    static_cast<double>(samples));
        report.z_score = diff.convert_to<double>() / se;
    }
    report.pass = std::abs(report.z_score) <= 4.0;
    return report;
}

// ---------------------------------------------------------------------------
// Eigenvector censuses and the cycle identity
// ---------------------------------------------------------------------------

/// Eigenvector census of one permutation by direct enumeration: the number of nonzero
/// vectors x (star: with pairwise distinct nonzero entries) such that
/// mat(sigma) x = lambda x for some nonzero lambda.
inline std::uint64_t count_eigenvectors(const Permutation& sigma, long long q, bool star,
                                   std::uint64_t cap = kVectorScanCapDefault) {
    if (!is_prime(q))
        throw parameter_error("count_eigenvectors: q must be prime");
    const unsigned m = sigma.size();
    detail::checked_pow_cost(q, m, cap, "count_eigenvectors");
    const Fp fp(q);

    std::uint64_t count = 0;
    std::vector<std::uint32_t> x(m, 0);
    for (;;) {
        // advance the odometer; the all-zero vector is skipped as a side
        // effect of starting the loop body after the first increment
        unsigned i = 0;
        while (i < m) {
            if (++x[i] < static_cast<std::uint32_t>(q)) break;
            x[i] = 0;
            ++i;
        }
        if (i == m) break;

        bool eligible = true;
        if (star) {
            std::vector<std::uint32_t> sorted = x;
            std::sort(sorted.begin(), sorted.end());
            eligible = sorted.front() != 0 &&
                       std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        }
        if (!eligible) continue;

        // (mat(sigma) x)_i = x_{sigma(i)}; the eigenvalue, if any, is fixed
        // by the first nonzero coordinate.
        std::uint32_t base = 0;
        while (x[base] == 0) ++base;
        const std::uint32_t xi = x[base], xsi = x[sigma(base)];
        if (xsi == 0) continue; // lambda would be 0, which is excluded
        const std::uint32_t lambda = fp.mul(xsi, fp.inv(xi));
        bool ok = true;
        for (unsigned j = 0; j < m && ok; ++j)
            ok = x[sigma(j)] == fp.mul(lambda, x[j]);
        count += ok;
    }
    return count;
}

/// Checks, by enumerating all of S_m, that
///   sum_sigma q^(number of cycles of sigma with length divisible by d)
/// equals m! C(floor((q+m-1)/d), floor(m/d)). Requires d | q - 1.
inline bool check_cycle_identity(unsigned m, long long q, std::uint64_t d,
                                 unsigned cap = kCycleIdentityCapDefault) {
    if (m < 1) throw parameter_error("check_cycle_identity: m must be >= 1");
    if (q < 2) throw parameter_error("check_cycle_identity: q must be >= 2");
    if (d == 0 || static_cast<std::uint64_t>(q - 1) % d != 0)
        throw parameter_error("check_cycle_identity: d must divide q - 1");
    if (m > cap)
        throw cap_refusal("check_cycle_identity: m = " + std::to_string(m) +
                          " exceeds cap " + std::to_string(cap));
    Int lhs = 0;
    for_each_permutation(m, [&](const std::vector<std::uint32_t>& images) {
        std::vector<bool> seen(m, false);
        unsigned matching = 0;
        for (unsigned i = 0; i < m; ++i) {
            if (seen[i]) continue;
            unsigned len = 0, j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = images[j];
                ++len;
            }
            if (len % d == 0) ++matching;
        }
        lhs += pow_int(Int(q), matching);
    });
    const Int rhs = factorial(m) * binomial((q + m - 1) / d, m / d);
    return lhs == rhs;
}

} // namespace pkp
