#pragma once

/**
 * The four instance generators and the instance file format.
 *
 * gen_ipkp / gen_ipkp_star draw, in order, A uniform over the full-rank
 * class, B uniform over its class (plain or distinct-nonzero-rows), and a
 * uniform permutation pi, then set C = A * mat(pi) * B. gen_pkp /
 * gen_pkp_star draw B, pi, and then A uniformly among the full-rank matrices
 * annihilating mat(pi) * B: with K a basis of the left kernel of mat(pi) * B
 * and M uniform full-rank ell x (m - n), the product M * K ranges uniformly
 * over exactly that set (M -> M * K is a bijection onto it), so no rejection
 * loop is needed.
 *
 * Instances serialize to a small JSON document with fields format_version,
 * variant, q, ell, m, n, A, B, C (omitted for homogeneous instances), and pi
 * (1-indexed, only on request). Matrices are row-major arrays of arrays of
 * integers in [0, q).
 */

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pkp/errors.hpp"
#include "pkp/linalg.hpp"
#include "pkp/params.hpp"
#include "pkp/sampling.hpp"

namespace pkp {

inline constexpr int kInstanceFormatVersion = 1;

struct IpkpInstance {
    ParameterSet params;
    FqMatrix A, B, C;
    std::optional<Permutation> secret;
};

struct PkpInstance {
    ParameterSet params;
    FqMatrix A, B;
    std::optional<Permutation> secret;

    /// The same instance with the zero right-hand side materialized.
    IpkpInstance as_ipkp() const {
        return IpkpInstance{params, A, B, FqMatrix(params.ell, params.n, params.q), secret};
    }
};

using Instance = std::variant<IpkpInstance, PkpInstance>;

namespace detail {

inline FqMatrix sample_b(const ParameterSet& p, SeededRng& rng) {
    if (p.star()) return sample_distinct_nonzero_rows_full_rank(p.m, p.n, p.q, rng);
    // Uniform over rank-n m x n matrices, via the transpose of a wide draw
    // (transposition is a rank-preserving bijection between the classes).
    return transpose(sample_full_rank(p.n, p.m, p.q, rng));
}

inline void require_variant(const ParameterSet& p, Variant expected, const char* who) {
    if (p.variant != expected)
        throw parameter_error(std::string(who) + ": params.variant must be " +
                              to_string(expected));
}

} // namespace detail

inline IpkpInstance gen_ipkp_any(const ParameterSet& params, SeededRng& rng) {
    params.validate();
    params.require_prime_q();
    FqMatrix A = sample_full_rank(params.ell, params.m, params.q, rng);
    FqMatrix B = detail::sample_b(params, rng);
    Permutation pi = sample_permutation(params.m, rng);
    FqMatrix C = mat_mul(A, permute_rows(pi, B));
    return IpkpInstance{params, std::move(A), std::move(B), std::move(C), std::move(pi)};
}

inline IpkpInstance gen_ipkp(const ParameterSet& params, SeededRng& rng) {
    detail::require_variant(params, Variant::ipkp, "gen_ipkp");
    return gen_ipkp_any(params, rng);
}

inline IpkpInstance gen_ipkp_star(const ParameterSet& params, SeededRng& rng) {
    detail::require_variant(params, Variant::ipkp_star, "gen_ipkp_star");
    return gen_ipkp_any(params, rng);
}

inline PkpInstance gen_pkp_any(const ParameterSet& params, SeededRng& rng) {
    params.validate();
    params.require_prime_q();
    FqMatrix B = detail::sample_b(params, rng);
    Permutation pi = sample_permutation(params.m, rng);
    FqMatrix K = left_kernel_basis(permute_rows(pi, B)); // (m - n) x m
    FqMatrix M = sample_full_rank(params.ell, params.m - params.n, params.q, rng);
    FqMatrix A = mat_mul(M, K);
    return PkpInstance{params, std::move(A), std::move(B), std::move(pi)};
}

inline PkpInstance gen_pkp(const ParameterSet& params, SeededRng& rng) {
    detail::require_variant(params, Variant::pkp, "gen_pkp");
    return gen_pkp_any(params, rng);
}

inline PkpInstance gen_pkp_star(const ParameterSet& params, SeededRng& rng) {
    detail::require_variant(params, Variant::pkp_star, "gen_pkp_star");
    return gen_pkp_any(params, rng);
}

/// Generate through the variant recorded in params.
inline Instance generate(const ParameterSet& params, SeededRng& rng) {
    if (params.homogeneous()) return gen_pkp_any(params, rng);
    return gen_ipkp_any(params, rng);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json matrix_to_json(const FqMatrix& X) {
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned i = 0; i < X.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (unsigned j = 0; j < X.cols(); ++j) row.push_back(X.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline FqMatrix matrix_from_json(const nlohmann::json& j, unsigned rows, unsigned cols,
                                 long long q, const char* name) {
    const std::string where = std::string("field \"") + name + "\"";
    if (!j.is_array() || j.size() != rows)
        throw parse_error(where + ": expected " + std::to_string(rows) + " rows");
    FqMatrix X(rows, cols, q);
    for (unsigned i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.size() != cols)
            throw parse_error(where + ", row " + std::to_string(i) + ": expected " +
                              std::to_string(cols) + " entries");
        for (unsigned c = 0; c < cols; ++c) {
            const auto& cell = row[c];
            if (!cell.is_number_integer())
                throw parse_error(where + ", row " + std::to_string(i) + ", column " +
                                  std::to_string(c) + ": entry is not an integer");
            const long long v = cell.get<long long>();
            if (v < 0 || v >= q)
                throw parse_error(where + ", row " + std::to_string(i) + ", column " +
                                  std::to_string(c) + ": entry " + std::to_string(v) +
                                  " out of [0, q)");
            X.at(i, c) = static_cast<std::uint32_t>(v);
        }
    }
    return X;
}

inline nlohmann::json instance_to_json(const ParameterSet& p, const FqMatrix& A,
                                       const FqMatrix& B, const FqMatrix* C,
                                       const std::optional<Permutation>& secret,
                                       bool include_secret) {
    nlohmann::json j;
    j["format_version"] = kInstanceFormatVersion;
    j["variant"] = to_string(p.variant);
    j["q"] = p.q;
    j["ell"] = p.ell;
    j["m"] = p.m;
    j["n"] = p.n;
    j["A"] = matrix_to_json(A);
    j["B"] = matrix_to_json(B);
    if (C != nullptr) j["C"] = matrix_to_json(*C);
    if (include_secret) {
        if (!secret) throw parameter_error("serialize: no secret to include");
        j["pi"] = secret->to_one_indexed();
    }
    return j;
}

} // namespace detail

inline std::string serialize(const IpkpInstance& inst, bool include_secret = false) {
    return detail::instance_to_json(inst.params, inst.A, inst.B, &inst.C, inst.secret,
                                    include_secret)
               .dump(2) +
           "\n";
}

inline std::string serialize(const PkpInstance& inst, bool include_secret = false) {
    return detail::instance_to_json(inst.params, inst.A, inst.B, nullptr, inst.secret,
                                    include_secret)
               .dump(2) +
           "\n";
}

inline std::string serialize(const Instance& inst, bool include_secret = false) {
    return std::visit([&](const auto& x) { return serialize(x, include_secret); }, inst);
}

inline const ParameterSet& instance_params(const Instance& inst) {
    return std::visit([](const auto& x) -> const ParameterSet& { return x.params; }, inst);
}

/// Parse an instance document. Structural problems (bad JSON, wrong
/// dimensions, entries out of range) and semantic inconsistencies (rank
/// conditions, a secret that does not solve the instance) raise parse_error;
/// a missing "C" means the homogeneous right-hand side.
inline Instance deserialize(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key))
            throw parse_error(std::string("missing field \"") + key + "\"");
        return j.at(key);
    };
    if (!need("format_version").is_number_integer() ||
        need("format_version").get<int>() != kInstanceFormatVersion)
        throw parse_error("field \"format_version\": expected " +
                          std::to_string(kInstanceFormatVersion));
    if (!need("variant").is_string()) throw parse_error("field \"variant\": expected string");

    ParameterSet p;
    try {
        p.variant = parse_variant(j.at("variant").get<std::string>());
        for (const char* key : {"q", "ell", "m", "n"})
            if (!need(key).is_number_integer() || need(key).get<long long>() < 1)
                throw parse_error(std::string("field \"") + key +
                                  "\": expected a positive integer");
        p.q = j.at("q").get<long long>();
        p.ell = j.at("ell").get<unsigned>();
        p.m = j.at("m").get<unsigned>();
        p.n = j.at("n").get<unsigned>();
        p.validate();
    } catch (const parameter_error& e) {
        throw parse_error(std::string("invalid parameters: ") + e.what());
    }

    FqMatrix A = detail::matrix_from_json(need("A"), p.ell, p.m, p.q, "A");
    FqMatrix B = detail::matrix_from_json(need("B"), p.m, p.n, p.q, "B");
    std::optional<FqMatrix> C;
    if (j.contains("C")) C = detail::matrix_from_json(j.at("C"), p.ell, p.n, p.q, "C");

    std::optional<Permutation> secret;
    if (j.contains("pi")) {
        const auto& jp = j.at("pi");
        if (!jp.is_array() || jp.size() != p.m)
            throw parse_error("field \"pi\": expected an array of length m");
        std::vector<std::uint32_t> images1;
        for (const auto& v : jp) {
            if (!v.is_number_integer() || v.get<long long>() < 1 ||
                v.get<long long>() > p.m)
                throw parse_error("field \"pi\": images must be integers in [1, m]");
            images1.push_back(v.get<std::uint32_t>());
        }
        try {
            secret = Permutation::from_one_indexed(images1);
        } catch (const parameter_error& e) {
            throw parse_error(std::string("field \"pi\": ") + e.what());
        }
    }

    if (rank(A) != p.ell) throw parse_error("field \"A\": rank must equal ell");
    if (rank(B) != p.n) throw parse_error("field \"B\": rank must equal n");
    if (p.star()) {
        std::set<std::vector<std::uint32_t>> rows;
        for (unsigned i = 0; i < p.m; ++i) {
            std::vector<std::uint32_t> row(p.n);
            bool zero = true;
            for (unsigned c = 0; c < p.n; ++c) {
                row[c] = B.at(i, c);
                zero = zero && row[c] == 0;
            }
            if (zero || !rows.insert(row).second)
                throw parse_error("field \"B\": star variant needs pairwise distinct "
                                  "nonzero rows");
        }
    }

    if (p.homogeneous()) {
        if (C && !C->is_zero())
            throw parse_error("field \"C\": homogeneous variant requires C = 0");
        PkpInstance inst{p, std::move(A), std::move(B), std::move(secret)};
        if (inst.secret &&
            !mat_mul(inst.A, permute_rows(*inst.secret, inst.B)).is_zero())
            throw parse_error("field \"pi\": secret does not solve the instance");
        return inst;
    }
    IpkpInstance inst{p, std::move(A), std::move(B),
                      C ? std::move(*C) : FqMatrix(p.ell, p.n, p.q), std::move(secret)};
    if (inst.secret &&
        !(mat_mul(inst.A, permute_rows(*inst.secret, inst.B)) == inst.C))
        throw parse_error("field \"pi\": secret does not solve the instance");
    return inst;
}

} // namespace pkp
