#pragma once

/**
 * Arithmetic in the prime field F_q. Elements are machine integers in
 * [0, q) with the modulus carried by an Fp context, not per element.
 *
 * The context does not re-check primality on every construction (hot loops
 * build many of them); callers that accept user input validate q with
 * ParameterSet::require_prime_q() first. inv() detects non-invertible
 * elements, so a composite modulus cannot silently corrupt results.
 */

#include <cstdint>

#include "pkp/errors.hpp"
#include "pkp/exactnum.hpp"

namespace pkp {

struct Fp {
    std::uint32_t q;

    explicit Fp(long long modulus) {
        if (modulus < 2 || modulus > 2147483647LL)
            throw parameter_error("Fp: modulus must be in [2, 2^31 - 1]");
        q = static_cast<std::uint32_t>(modulus);
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b; // no overflow: a, b < 2^31
        return s >= q ? s - q : s;
    }

    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + q - b;
    }

    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q - a; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(a) * b) % q);
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw parameter_error("Fp::inv: division by zero");
        std::int64_t r0 = q, r1 = a % q, t0 = 0, t1 = 1;
        while (r1 != 0) {
            const std::int64_t k = r0 / r1;
            r0 -= k * r1;
            t0 -= k * t1;
            std::swap(r0, r1);
            std::swap(t0, t1);
        }
        if (r0 != 1)
            throw internal_error("Fp::inv: element not invertible (composite modulus?)");
        if (t0 < 0) t0 += q;
        return static_cast<std::uint32_t>(t0);
    }

    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        std::uint64_t base = a % q, result = 1;
        while (e != 0) {
            if (e & 1) result = result * base % q;
            base = base * base % q;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(result);
    }

    /// Least d >= 1 with a^d = 1; divides q - 1 for prime q. Scans the
    /// divisors of q - 1 in ascending order.
    std::uint64_t multiplicative_order(std::uint32_t a) const {
        if (a % q == 0) throw parameter_error("Fp::multiplicative_order: zero has no order");
        for (std::uint64_t d : divisors(q - 1))
            if (pow(a, d) == 1) return d;
        throw internal_error("Fp::multiplicative_order: no divisor of q-1 works "
                             "(composite modulus?)");
    }
};

} // namespace pkp
