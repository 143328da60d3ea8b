#pragma once

/**
 * Problem parameters (q, ell, m, n) together with the variant being studied,
 * and the validity checks each variant imposes.
 */

#include <string>

#include "pkp/errors.hpp"
#include "pkp/exactnum.hpp"

namespace pkp {

enum class Variant { ipkp, ipkp_star, pkp, pkp_star };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::ipkp: return "ipkp";
        case Variant::ipkp_star: return "ipkp_star";
        case Variant::pkp: return "pkp";
        case Variant::pkp_star: return "pkp_star";
    }
    throw internal_error("to_string(Variant): bad enum value");
}

inline Variant parse_variant(const std::string& s) {
    if (s == "ipkp") return Variant::ipkp;
    if (s == "ipkp_star") return Variant::ipkp_star;
    if (s == "pkp") return Variant::pkp;
    if (s == "pkp_star") return Variant::pkp_star;
    throw parameter_error("unknown variant \"" + s +
                          "\" (expected ipkp, ipkp_star, pkp, or pkp_star)");
}

inline bool is_star(Variant v) { return v == Variant::ipkp_star || v == Variant::pkp_star; }
inline bool is_homogeneous(Variant v) { return v == Variant::pkp || v == Variant::pkp_star; }

struct ParameterSet {
    long long q = 2;   // field size
    unsigned ell = 1;  // rows of A
    unsigned m = 1;    // permuted dimension
    unsigned n = 1;    // columns of B
    Variant variant = Variant::ipkp;

    bool star() const { return is_star(variant); }
    bool homogeneous() const { return is_homogeneous(variant); }

    // m < q^n, evaluated without overflow.
    bool m_below_q_pow_n() const {
        Int p = 1;
        for (unsigned i = 0; i < n; ++i) {
            p *= q;
            if (p > m) return true;
        }
        return p > m;
    }

    /// Checks the structural constraints of the variant; throws
    /// parameter_error naming the violated constraint.
    void validate() const {
        if (q < 2) throw parameter_error("constraint violated: q >= 2");
        if (q > 2147483647LL) throw parameter_error("constraint violated: q <= 2^31 - 1");
        if (ell < 1) throw parameter_error("constraint violated: ell >= 1");
        if (m < 1) throw parameter_error("constraint violated: m >= 1");
        if (n < 1) throw parameter_error("constraint violated: n >= 1");
        if (homogeneous()) {
            if (ell + n > m) throw parameter_error("constraint violated: ell + n <= m (pkp)");
        } else {
            if (ell > m || n > m)
                throw parameter_error("constraint violated: max(ell, n) <= m (ipkp)");
        }
        if (star()) {
            if (!(n <= m && m_below_q_pow_n()))
                throw parameter_error("constraint violated: n <= m < q^n (star variant)");
        }
    }

    /// Samplers, generators, and brute-force oracles work in F_q and need q
    /// prime; the closed-form evaluation does not.
    void require_prime_q() const {
        if (!is_prime(q))
            throw parameter_error("q = " + std::to_string(q) +
                                  " is not prime; sampling and enumeration require a prime q");
    }

    /// Formula evaluation treats q as a plain integer but the problem is only
    /// meaningful for prime powers. Returns false (caller should warn) when q
    /// is not a prime power and allow_any_q is set; throws otherwise.
    bool check_prime_power_q(bool allow_any_q) const {
        if (is_prime_power(q)) return true;
        if (allow_any_q) return false;
        throw parameter_error("q = " + std::to_string(q) +
                              " is not a prime power (pass the override to evaluate anyway)");
    }
};

inline bool operator==(const ParameterSet& a, const ParameterSet& b) {
    return a.q == b.q && a.ell == b.ell && a.m == b.m && a.n == b.n && a.variant == b.variant;
}

} // namespace pkp
