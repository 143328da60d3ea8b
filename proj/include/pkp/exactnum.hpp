#pragma once

/**
 * Exact integer/rational arithmetic and the counting kernels shared by all
 * the expectation formulas: factorials, binomials, unsigned Stirling numbers
 * of the first kind, Euler's totient, divisor lists, and the census of
 * fixed-rank matrices over a q-element field.
 *
 * All values are exact; nothing here ever rounds. Decimal strings are a
 * rendering of the exact value, correctly rounded (ties to even) at the
 * requested number of significant digits.
 */

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pkp/errors.hpp"

namespace pkp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Rational in lowest terms with positive denominator; den == 0 is a bug.
inline Rat make_rational(Int num, Int den) {
    if (den == 0) throw internal_error("make_rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rat(std::move(num), std::move(den));
}

inline Int pow_int(const Int& base, std::uint64_t exp) {
    Int result = 1;
    Int b = base;
    while (exp != 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

inline Int pow10(std::uint64_t k) { return pow_int(Int(10), k); }

inline Int factorial(std::uint64_t k) {
    Int result = 1;
    for (std::uint64_t i = 2; i <= k; ++i) result *= i;
    return result;
}

// C(a, b), with C(a, b) = 0 for b > a. Multiplicative form; every partial
// division is exact because each prefix is itself a binomial coefficient.
inline Int binomial(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    Int result = 1;
    for (std::uint64_t i = 0; i < b; ++i) {
        result *= Int(a - i);
        result /= Int(i + 1);
    }
    return result;
}

// Euler's totient by trial-division factorization. Supports k up to 2^63-1;
// every use in this library has k < 2^31.
inline std::uint64_t euler_phi(std::uint64_t k) {
    if (k == 0) throw parameter_error("euler_phi: k must be >= 1");
    std::uint64_t result = k;
    for (std::uint64_t p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            while (k % p == 0) k /= p;
            result -= result / p;
        }
    }
    if (k > 1) result -= result / k;
    return result;
}

// All divisors of k, ascending.
inline std::vector<std::uint64_t> divisors(std::uint64_t k) {
    if (k == 0) throw parameter_error("divisors: k must be >= 1");
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= k; ++d) {
        if (k % d == 0) {
            small.push_back(d);
            if (d != k / d) large.push_back(k / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/// Row m of the unsigned Stirling-number triangle: row[k] counts the
/// permutations of m elements with exactly k disjoint cycles, k = 0..m.
/// Recurrence |S_{m,k}| = |S_{m-1,k-1}| + (m-1)|S_{m-1,k}|.
inline std::vector<Int> stirling1_row(unsigned m) {
    std::vector<Int> row{1};
    for (unsigned mm = 1; mm <= m; ++mm) {
        std::vector<Int> next(mm + 1, Int(0));
        for (unsigned k = 1; k <= mm; ++k) {
            next[k] = row[k - 1];
            if (k < row.size()) next[k] += Int(mm - 1) * row[k];
        }
        row = std::move(next);
    }
    return row;
}

inline Int stirling1_unsigned(unsigned m, unsigned k) {
    if (k < 1 || k > m) throw parameter_error("stirling1_unsigned: need 1 <= k <= m");
    return stirling1_row(m)[k];
}

/// Number of m x n matrices of rank exactly r over a field of q elements:
/// prod_{i=0}^{r-1} (q^m - q^i)(q^n - q^i)/(q^r - q^i), empty product = 1,
/// and 0 when r > min(m, n). Numerator and denominator are accumulated
/// separately and divided once; the division is checked exact.
inline Int rank_count(unsigned m, unsigned n, unsigned r, long long q) {
    if (q < 2) throw parameter_error("rank_count: q must be >= 2");
    if (r > std::min(m, n)) return 0;
    if (r == 0) return 1;
    const Int Q = q;
    Int num = 1, den = 1;
    for (unsigned i = 0; i < r; ++i) {
        num *= (pow_int(Q, m) - pow_int(Q, i)) * (pow_int(Q, n) - pow_int(Q, i));
        den *= pow_int(Q, r) - pow_int(Q, i);
    }
    Int quo, rem;
    boost::multiprecision::divide_qr(num, den, quo, rem);
    if (rem != 0) throw internal_error("rank_count: division not exact");
    return quo;
}

inline bool is_prime(long long q) {
    if (q < 2) return false;
    for (long long p = 2; p * p <= q; ++p)
        if (q % p == 0) return false;
    return true;
}

// Smallest prime factor p with q = p^k, or 0 if q is not a prime power.
inline long long prime_power_base(long long q) {
    if (q < 2) return 0;
    long long base = q;
    for (long long p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            base = p;
            break;
        }
    }
    long long t = q;
    while (t % base == 0) t /= base;
    return t == 1 ? base : 0;
}

inline bool is_prime_power(long long q) { return prime_power_base(q) != 0; }

// ---------------------------------------------------------------------------
// Decimal rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t digits10(const Int& x) {
    return Int(boost::multiprecision::abs(x)).str().size();
}

// round(a / b) for a >= 0, b > 0, ties to even.
inline Int round_div_ties_even(const Int& a, const Int& b) {
    Int quo, rem;
    boost::multiprecision::divide_qr(a, b, quo, rem);
    const Int twice = rem * 2;
    if (twice > b || (twice == b && boost::multiprecision::bit_test(quo, 0))) ++quo;
    return quo;
}

} // namespace detail

/// floor(log10(|x|)) of a nonzero rational, computed exactly.
inline long long floor_log10_abs(const Rat& x) {
    if (x == 0) throw parameter_error("floor_log10_abs: x must be nonzero");
    const Int num = boost::multiprecision::abs(numerator(x));
    const Int den = denominator(x);
    long long e = static_cast<long long>(detail::digits10(num)) -
                  static_cast<long long>(detail::digits10(den));
    // |x| in [10^e, 10^{e+1}) iff den*10^e <= num < den*10^{e+1}; the digit
    // estimate is off by at most one, so correct with comparisons.
    auto below = [&](long long k) { // num < den * 10^k ?
        return k >= 0 ? num < den * pow10(static_cast<std::uint64_t>(k))
                      : num * pow10(static_cast<std::uint64_t>(-k)) < den;
    };
    while (below(e)) --e;
    while (!below(e + 1)) ++e;
    return e;
}

/// Decimal rendering of an exact rational at `digits` significant digits,
/// correctly rounded, ties to even. Scientific notation ("d.dddde±k") is used
/// when |x| < 10^-3 or |x| >= 10^9, plain positional notation otherwise.
/// Trailing zeros in the fraction are trimmed.
inline std::string to_decimal(const Rat& x, unsigned digits = 12) {
    if (digits == 0) throw parameter_error("to_decimal: digits must be >= 1");
    if (x == 0) return "0";
    const bool negative = x < 0;
    const Int num = boost::multiprecision::abs(numerator(x));
    const Int den = denominator(x);
    long long e = floor_log10_abs(x);

    // Scaled mantissa with `digits` digits: round(|x| * 10^(digits-1-e)).
    const long long shift = static_cast<long long>(digits) - 1 - e;
    Int mant = shift >= 0
        ? detail::round_div_ties_even(num * pow10(static_cast<std::uint64_t>(shift)), den)
        : detail::round_div_ties_even(num, den * pow10(static_cast<std::uint64_t>(-shift)));
    if (mant == pow10(digits)) { // rounding carried into the next decade
        mant /= 10;
        ++e;
    }

    std::string ds = mant.str();
    const bool scientific = e < -3 || e >= 9;
    std::string out;
    if (scientific) {
        out = ds.substr(0, 1);
        std::string frac = ds.substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
        out += "e" + std::to_string(e);
    } else if (e >= 0) {
        const auto ipart = static_cast<std::size_t>(e) + 1;
        if (ipart >= ds.size()) {
            out = ds + std::string(ipart - ds.size(), '0');
        } else {
            std::string frac = ds.substr(ipart);
            while (!frac.empty() && frac.back() == '0') frac.pop_back();
            out = ds.substr(0, ipart);
            if (!frac.empty()) out += "." + frac;
        }
    } else {
        std::string frac = std::string(static_cast<std::size_t>(-e) - 1, '0') + ds;
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out = "0." + frac;
    }
    return negative ? "-" + out : out;
}

/// "num/den" rendering of the exact value.
inline std::string to_fraction_string(const Rat& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

} // namespace pkp
