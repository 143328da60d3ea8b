#pragma once

// Shared helpers for the test suite: per-cell and global frequency checks,
// a decimal parser for round-trip tests, and the rejection-loop sampler that
// serves as the distribution oracle for the constructive homogeneous
// generator.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pkp/exactnum.hpp"
#include "pkp/generators.hpp"
#include "pkp/linalg.hpp"
#include "pkp/oracle.hpp"
#include "pkp/sampling.hpp"

namespace pkptest {

// |observed - N p| <= 4 sqrt(N p (1 - p)).
inline bool within_4_sigma(std::uint64_t observed, std::uint64_t samples, double prob) {
    const double expected = static_cast<double>(samples) * prob;
    const double sigma = std::sqrt(static_cast<double>(samples) * prob * (1.0 - prob));
    return std::abs(static_cast<double>(observed) - expected) <= 4.0 * sigma;
}

// Pearson chi-square statistic against the uniform law on `cells` support
// points, standardized: (chi2 - dof) / sqrt(2 dof). The exposed checks
// accept |z| <= 4.
template <class CountMap>
double uniform_chi2_z(const CountMap& counts, std::uint64_t samples, std::uint64_t cells) {
    const double expected = static_cast<double>(samples) / static_cast<double>(cells);
    double chi2 = 0.0;
    std::uint64_t seen = 0;
    for (const auto& [key, cnt] : counts) {
        const double d = static_cast<double>(cnt) - expected;
        chi2 += d * d / expected;
        ++seen;
    }
    chi2 += static_cast<double>(cells - seen) * expected; // empty cells
    const double dof = static_cast<double>(cells - 1);
    return (chi2 - dof) / std::sqrt(2.0 * dof);
}

// Key for tallying matrices / instances in support maps.
inline std::vector<std::uint32_t> key_of(const pkp::FqMatrix& X) { return X.entries(); }

inline std::vector<std::uint32_t> key_of(const pkp::FqMatrix& A, const pkp::FqMatrix& B,
                                         const pkp::Permutation& pi) {
    std::vector<std::uint32_t> k = A.entries();
    k.insert(k.end(), B.entries().begin(), B.entries().end());
    k.insert(k.end(), pi.images().begin(), pi.images().end());
    return k;
}

// The homogeneous generator described as rejection sampling: keep drawing A
// from the full-rank class until it annihilates pi * B. Usable only at tiny
// parameters; this is the distribution oracle for the constructive path.
inline pkp::FqMatrix rejection_loop_pkp_a(const pkp::FqMatrix& B, const pkp::Permutation& pi,
                                          unsigned ell, pkp::SeededRng& rng) {
    const pkp::FqMatrix PB = pkp::permute_rows(pi, B);
    for (;;) {
        pkp::FqMatrix A = pkp::sample_full_rank(ell, B.rows(), B.modulus(), rng);
        if (pkp::mat_mul(A, PB).is_zero()) return A;
    }
}

// Parses the output of pkp::to_decimal back into an exact rational:
// [-]ddd[.ddd][e<exp>].
inline pkp::Rat parse_decimal(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && s.front() == '-') {
        negative = true;
        s.erase(0, 1);
    }
    long long exp10 = 0;
    if (const auto epos = s.find('e'); epos != std::string::npos) {
        exp10 = std::stoll(s.substr(epos + 1));
        s.erase(epos);
    }
    std::string digits = s;
    if (const auto dot = digits.find('.'); dot != std::string::npos) {
        exp10 -= static_cast<long long>(digits.size() - dot - 1);
        digits.erase(dot, 1);
    }
    // strip leading zeros; cpp_int would read them as an octal prefix
    const auto first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    pkp::Int num(digits);
    pkp::Rat value = exp10 >= 0
        ? pkp::Rat(num * pkp::pow10(static_cast<std::uint64_t>(exp10)))
        : pkp::make_rational(num, pkp::pow10(static_cast<std::uint64_t>(-exp10)));
    return negative ? -value : value;
}

} // namespace pkptest
