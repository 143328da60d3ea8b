#pragma once

/**
 * Seeded uniform samplers for the random objects the instance generators
 * draw: permutations, full-rank matrices, and matrices with pairwise
 * distinct nonzero rows.
 *
 * The generator is std::mt19937_64, which the C++ standard pins down
 * bit-exactly, so a fixed seed reproduces the same stream on every platform.
 * Bounded sampling rejects the overflow region of the 64-bit range, so it is
 * unbiased for every bound.
 */

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "pkp/errors.hpp"
#include "pkp/linalg.hpp"
#include "pkp/params.hpp"

namespace pkp {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound); unbiased via rejection of the overflow region.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw parameter_error("SeededRng::below: bound must be >= 1");
        // Largest multiple of bound not exceeding 2^64 - 1.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Uniform permutation of {1..m} by Fisher-Yates.
inline Permutation sample_permutation(unsigned m, SeededRng& rng) {
    if (m < 1) throw parameter_error("sample_permutation: m must be >= 1");
    std::vector<std::uint32_t> im(m);
    std::iota(im.begin(), im.end(), 0u);
    for (unsigned i = m - 1; i > 0; --i) {
        const auto j = static_cast<unsigned>(rng.below(i + 1));
        std::swap(im[i], im[j]);
    }
    return Permutation(std::move(im));
}

/// Uniform over all of F_q^{rows x cols}.
inline FqMatrix sample_uniform_matrix(unsigned rows, unsigned cols, long long q,
                                      SeededRng& rng) {
    FqMatrix X(rows, cols, q);
    for (auto& v : X.entries()) v = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(q)));
    return X;
}

namespace detail {

inline constexpr int kSamplerRetryCap = 10000;

inline void require_prime(long long q, const char* who) {
    if (!is_prime(q))
        throw parameter_error(std::string(who) + ": q = " + std::to_string(q) +
                              " is not prime");
}

} // namespace detail

/// Uniform over the rank-`rows` matrices in F_q^{rows x cols}, rows <= cols,
/// by rejection. The acceptance probability is at least 1/4 for every valid
/// (q, rows, cols), so the retry cap is unreachable in practice.
inline FqMatrix sample_full_rank(unsigned rows, unsigned cols, long long q, SeededRng& rng) {
    if (rows > cols)
        throw parameter_error("sample_full_rank: need rows <= cols");
    detail::require_prime(q, "sample_full_rank");
    for (int attempt = 0; attempt < detail::kSamplerRetryCap; ++attempt) {
        FqMatrix X = sample_uniform_matrix(rows, cols, q, rng);
        if (rank(X) == rows) return X;
    }
    throw internal_error("sample_full_rank: retry cap exceeded");
}

/// Uniform over the matrices in F_q^{m x n} with m pairwise distinct nonzero
/// rows and rank n (requires n <= m < q^n), by rejection: draw an ordered
/// sample of m distinct nonzero rows, accept when the rank is n.
inline FqMatrix sample_distinct_nonzero_rows_full_rank(unsigned m, unsigned n, long long q,
                                                       SeededRng& rng) {
    detail::require_prime(q, "sample_distinct_nonzero_rows_full_rank");
    if (!(n <= m && ParameterSet{q, 1, m, n, Variant::ipkp_star}.m_below_q_pow_n()))
        throw parameter_error("sample_distinct_nonzero_rows_full_rank: need n <= m < q^n");

    // Number of nonzero row values, when it is small enough to materialize.
    const Int row_space = pow_int(Int(q), n) - 1;
    const bool materialize = row_space <= 65536;

    for (int attempt = 0; attempt < detail::kSamplerRetryCap; ++attempt) {
        FqMatrix B(m, n, q);
        if (materialize) {
            // Partial Fisher-Yates over the explicit list of nonzero rows,
            // encoded base q (codes 1 .. q^n - 1).
            const auto total = static_cast<std::uint32_t>(row_space);
            std::vector<std::uint32_t> codes(total);
            std::iota(codes.begin(), codes.end(), 1u);
            for (unsigned i = 0; i < m; ++i) {
                const auto j = i + static_cast<std::uint32_t>(rng.below(total - i));
                std::swap(codes[i], codes[j]);
                std::uint32_t c = codes[i];
                for (unsigned col = 0; col < n; ++col) {
                    B.at(i, col) = c % static_cast<std::uint32_t>(q);
                    c /= static_cast<std::uint32_t>(q);
                }
            }
        } else {
            // Hash-set rejection over freshly drawn rows.
            std::set<std::vector<std::uint32_t>> chosen;
            for (unsigned i = 0; i < m; ++i) {
                int row_attempt = 0;
                for (;;) {
                    if (++row_attempt > detail::kSamplerRetryCap)
                        throw internal_error(
                            "sample_distinct_nonzero_rows_full_rank: row retry cap exceeded");
                    std::vector<std::uint32_t> row(n);
                    bool zero = true;
                    for (auto& v : row) {
                        v = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(q)));
                        zero = zero && v == 0;
                    }
                    if (zero || !chosen.insert(row).second) continue;
                    for (unsigned col = 0; col < n; ++col) B.at(i, col) = row[col];
                    break;
                }
            }
        }
        if (rank(B) == n) return B;
    }
    throw internal_error("sample_distinct_nonzero_rows_full_rank: retry cap exceeded");
}

} // namespace pkp
