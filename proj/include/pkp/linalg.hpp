#pragma once

/**
 * Dense matrices over the prime field F_q and permutations of {1..m}.
 *
 * Permutation-matrix convention: the matrix of pi has a 1 at (i, j) exactly
 * when j = pi(i), so row i of pi * B is row pi(i) of B. Under this convention
 * the product of two permutation matrices satisfies
 *     mat(sigma) * mat(tau) = mat(compose(sigma, tau))
 * with compose(sigma, tau)(i) = tau(sigma(i)), i.e. the group product reads
 * left to right ("apply sigma's matrix, then tau's"). The exhaustive S_3 test
 * pins this law.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "pkp/errors.hpp"
#include "pkp/gfp.hpp"

namespace pkp {

class FqMatrix {
public:
    FqMatrix(unsigned rows, unsigned cols, long long q)
        : rows_(rows), cols_(cols), fp_(q),
          entries_(static_cast<std::size_t>(rows) * cols, 0) {}

    FqMatrix(unsigned rows, unsigned cols, long long q, std::vector<std::uint32_t> entries)
        : rows_(rows), cols_(cols), fp_(q), entries_(std::move(entries)) {
        if (entries_.size() != static_cast<std::size_t>(rows) * cols)
            throw parameter_error("FqMatrix: entry count does not match dimensions");
        for (std::uint32_t v : entries_)
            if (v >= fp_.q) throw parameter_error("FqMatrix: entry out of [0, q)");
    }

    static FqMatrix identity(unsigned n, long long q) {
        FqMatrix I(n, n, q);
        for (unsigned i = 0; i < n; ++i) I.at(i, i) = 1;
        return I;
    }

    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }
    long long modulus() const { return fp_.q; }
    const Fp& field() const { return fp_; }

    std::uint32_t at(unsigned i, unsigned j) const {
        return entries_[static_cast<std::size_t>(i) * cols_ + j];
    }
    std::uint32_t& at(unsigned i, unsigned j) {
        return entries_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<std::uint32_t>& entries() const { return entries_; }
    std::vector<std::uint32_t>& entries() { return entries_; }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](std::uint32_t v) { return v == 0; });
    }

    friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.fp_.q == b.fp_.q &&
               a.entries_ == b.entries_;
    }

private:
    unsigned rows_, cols_;
    Fp fp_;
    std::vector<std::uint32_t> entries_;
};

inline FqMatrix mat_mul(const FqMatrix& X, const FqMatrix& Y) {
    if (X.modulus() != Y.modulus())
        throw parameter_error("mat_mul: modulus mismatch");
    if (X.cols() != Y.rows())
        throw parameter_error("mat_mul: inner dimensions do not match");
    const Fp& fp = X.field();
    FqMatrix Z(X.rows(), Y.cols(), X.modulus());
    for (unsigned i = 0; i < X.rows(); ++i)
        for (unsigned k = 0; k < X.cols(); ++k) {
            const std::uint64_t x = X.at(i, k);
            if (x == 0) continue;
            for (unsigned j = 0; j < Y.cols(); ++j)
                Z.at(i, j) = static_cast<std::uint32_t>(
                    (x * Y.at(k, j) + Z.at(i, j)) % fp.q);
        }
    return Z;
}

inline FqMatrix transpose(const FqMatrix& X) {
    FqMatrix T(X.cols(), X.rows(), X.modulus());
    for (unsigned i = 0; i < X.rows(); ++i)
        for (unsigned j = 0; j < X.cols(); ++j) T.at(j, i) = X.at(i, j);
    return T;
}

namespace detail {

// In-place reduced row echelon form; returns the pivot columns. First
// nonzero entry in column order is the pivot (exact arithmetic needs no
// pivoting heuristics), which makes the result deterministic.
inline std::vector<unsigned> rref_in_place(FqMatrix& M) {
    const Fp& fp = M.field();
    std::vector<unsigned> pivots;
    unsigned r = 0;
    for (unsigned c = 0; c < M.cols() && r < M.rows(); ++c) {
        unsigned p = r;
        while (p < M.rows() && M.at(p, c) == 0) ++p;
        if (p == M.rows()) continue;
        if (p != r)
            for (unsigned j = 0; j < M.cols(); ++j) std::swap(M.at(p, j), M.at(r, j));
        const std::uint32_t scale = fp.inv(M.at(r, c));
        for (unsigned j = c; j < M.cols(); ++j) M.at(r, j) = fp.mul(M.at(r, j), scale);
        for (unsigned i = 0; i < M.rows(); ++i) {
            if (i == r || M.at(i, c) == 0) continue;
            const std::uint32_t f = M.at(i, c);
            for (unsigned j = c; j < M.cols(); ++j)
                M.at(i, j) = fp.sub(M.at(i, j), fp.mul(f, M.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

inline unsigned rank(const FqMatrix& X) {
    FqMatrix M = X;
    return static_cast<unsigned>(detail::rref_in_place(M).size());
}

/// Basis of the left kernel {x : x X = 0} as the rows of a
/// (rows(X) - rank(X)) x rows(X) matrix in reduced echelon form, so the
/// result is canonical for the subspace.
inline FqMatrix left_kernel_basis(const FqMatrix& X) {
    const unsigned m = X.rows();
    FqMatrix T = transpose(X);
    const std::vector<unsigned> pivots = detail::rref_in_place(T);
    std::vector<bool> is_pivot(m, false);
    for (unsigned c : pivots) is_pivot[c] = true;

    FqMatrix K(m - static_cast<unsigned>(pivots.size()), m, X.modulus());
    const Fp& fp = X.field();
    unsigned row = 0;
    for (unsigned c = 0; c < m; ++c) {
        if (is_pivot[c]) continue;
        K.at(row, c) = 1;
        for (unsigned i = 0; i < pivots.size(); ++i)
            K.at(row, pivots[i]) = fp.neg(T.at(i, c));
        ++row;
    }
    detail::rref_in_place(K); // canonicalize
    return K;
}

class Permutation {
public:
    /// Construct from 0-based images: images[i] = pi(i). Must be a bijection.
    explicit Permutation(std::vector<std::uint32_t> images) : map_(std::move(images)) {
        std::vector<bool> seen(map_.size(), false);
        for (std::uint32_t v : map_) {
            if (v >= map_.size() || seen[v])
                throw parameter_error("Permutation: images are not a bijection");
            seen[v] = true;
        }
        compute_cycles();
    }

    static Permutation identity(unsigned m) {
        std::vector<std::uint32_t> im(m);
        std::iota(im.begin(), im.end(), 0u);
        return Permutation(std::move(im));
    }

    static Permutation from_one_indexed(const std::vector<std::uint32_t>& images1) {
        std::vector<std::uint32_t> im;
        im.reserve(images1.size());
        for (std::uint32_t v : images1) {
            if (v == 0) throw parameter_error("Permutation: 1-indexed image contains 0");
            im.push_back(v - 1);
        }
        return Permutation(std::move(im));
    }

    std::vector<std::uint32_t> to_one_indexed() const {
        std::vector<std::uint32_t> out(map_);
        for (auto& v : out) ++v;
        return out;
    }

    unsigned size() const { return static_cast<unsigned>(map_.size()); }
    std::uint32_t operator()(std::uint32_t i) const { return map_[i]; }
    const std::vector<std::uint32_t>& images() const { return map_; }

    /// Cycle lengths, ascending (the cycle type).
    const std::vector<std::uint32_t>& cycle_lengths() const { return cycle_lengths_; }
    unsigned cycle_count() const { return static_cast<unsigned>(cycle_lengths_.size()); }

    Permutation inverse() const {
        std::vector<std::uint32_t> inv(map_.size());
        for (std::uint32_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
        return Permutation(std::move(inv));
    }

    /// The m x m matrix with a 1 at (i, pi(i)) for each i.
    FqMatrix matrix(long long q) const {
        FqMatrix P(size(), size(), q);
        for (std::uint32_t i = 0; i < map_.size(); ++i) P.at(i, map_[i]) = 1;
        return P;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.map_ == b.map_;
    }

private:
    void compute_cycles() {
        std::vector<bool> seen(map_.size(), false);
        for (std::uint32_t i = 0; i < map_.size(); ++i) {
            if (seen[i]) continue;
            std::uint32_t len = 0, j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = map_[j];
                ++len;
            }
            cycle_lengths_.push_back(len);
        }
        std::sort(cycle_lengths_.begin(), cycle_lengths_.end());
    }

    std::vector<std::uint32_t> map_;
    std::vector<std::uint32_t> cycle_lengths_;
};

/// Group product matching the matrix convention:
/// mat(compose(sigma, tau)) = mat(sigma) * mat(tau), i.e.
/// compose(sigma, tau)(i) = tau(sigma(i)).
inline Permutation compose(const Permutation& sigma, const Permutation& tau) {
    if (sigma.size() != tau.size())
        throw parameter_error("compose: size mismatch");
    std::vector<std::uint32_t> im(sigma.size());
    for (std::uint32_t i = 0; i < sigma.size(); ++i) im[i] = tau(sigma(i));
    return Permutation(std::move(im));
}

/// Row i of the result is row pi(i) of X; equals pi's matrix times X.
inline FqMatrix permute_rows(const Permutation& pi, const FqMatrix& X) {
    if (pi.size() != X.rows())
        throw parameter_error("permute_rows: permutation length != row count");
    FqMatrix Y(X.rows(), X.cols(), X.modulus());
    for (unsigned i = 0; i < X.rows(); ++i)
        for (unsigned j = 0; j < X.cols(); ++j) Y.at(i, j) = X.at(pi(i), j);
    return Y;
}

/// rank(mat(sigma) - I) = m - (number of cycles of sigma), valid over every
/// field: the rows of a cycle sum to zero and that is the only relation.
inline unsigned rank_perm_minus_identity(const Permutation& sigma) {
    const unsigned result = sigma.size() - sigma.cycle_count();
#ifndef NDEBUG
    // Cross-check against an explicit elimination (q = 3 keeps -1 != 1).
    FqMatrix D = sigma.matrix(3);
    for (unsigned i = 0; i < D.rows(); ++i) D.at(i, i) = D.field().sub(D.at(i, i), 1);
    if (rank(D) != result)
        throw internal_error("rank_perm_minus_identity: formula disagrees with elimination");
#endif
    return result;
}

} // namespace pkp
