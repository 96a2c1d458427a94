#pragma once

// Hereditary orders as valuation patterns, block shapes, and the extended
// affine Weyl representatives x = w d acting on them.

#include <algorithm>
#include <climits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "parahoric/combinatorics.hpp"
#include "parahoric/errors.hpp"

namespace parahoric {

/// Composition n = (n_0, ..., n_{e-1}) of R.
class BlockShape {
public:
    BlockShape() = default;
    explicit BlockShape(std::vector<int> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw ShapeError("empty block shape");
        for (int p : parts_)
            if (p < 1) throw ShapeError("block sizes must be positive");
    }
    /// The shape (f, ..., f) with e0 blocks.
    static BlockShape uniform(int f, int e0) { return BlockShape(std::vector<int>(e0, f)); }

    const std::vector<int>& parts() const { return parts_; }
    int R() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    int e() const { return static_cast<int>(parts_.size()); }
    std::vector<int> blocks() const { return block_of(parts_); }
    std::vector<int> starts() const { return block_starts(parts_); }

    /// Whether every block is a union of consecutive size-f blocks.
    bool refined_by(int f) const {
        return std::all_of(parts_.begin(), parts_.end(), [f](int p) { return p % f == 0; });
    }
    /// The same shape measured in units of f-blocks.
    std::vector<int> in_units_of(int f) const {
        if (!refined_by(f)) throw ShapeError("shape is not a union of f-blocks");
        std::vector<int> u;
        for (int p : parts_) u.push_back(p / f);
        return u;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
        return os.str();
    }
    friend bool operator==(const BlockShape&, const BlockShape&) = default;

private:
    std::vector<int> parts_;
};

/// Every shape between the minimal order (f, ..., f) and the maximal order
/// (f e0): compositions of e0 scaled by f, in lexicographic order.
inline std::vector<BlockShape> intermediate_shapes(int f, int e0) {
    std::vector<BlockShape> out;
    for (auto c : compositions(e0)) {
        for (auto& p : c) p *= f;
        out.emplace_back(std::move(c));
    }
    return out;
}

/// R x R matrix of minimal valuations: {A : val A_ij >= v(i,j)}.
struct OrderPattern {
    int R = 0;
    std::vector<int> v;

    OrderPattern() = default;
    explicit OrderPattern(int r, int fill = 0) : R(r), v(static_cast<std::size_t>(r) * r, fill) {}
    OrderPattern(int r, std::vector<int> values) : R(r), v(std::move(values)) {
        if (static_cast<int>(v.size()) != R * R) throw ShapeError("pattern size mismatch");
    }

    int& at(int i, int j) { return v[i * R + j]; }
    int at(int i, int j) const { return v[i * R + j]; }

    /// Whether the set is closed under multiplication: v(i,j) <= v(i,k) + v(k,j).
    bool multiplicatively_closed() const {
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < R; ++j)
                for (int k = 0; k < R; ++k)
                    if (at(i, j) > at(i, k) + at(k, j)) return false;
        return true;
    }
    bool is_order() const {
        for (int i = 0; i < R; ++i)
            if (at(i, i) != 0) return false;
        return multiplicatively_closed();
    }
    /// Set inclusion: this subset of other iff entrywise this >= other.
    bool contained_in(const OrderPattern& other) const {
        for (std::size_t t = 0; t < v.size(); ++t)
            if (v[t] < other.v[t]) return false;
        return true;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < R; ++i) {
            os << (i ? ",[" : "[");
            for (int j = 0; j < R; ++j) os << (j ? "," : "") << at(i, j);
            os << "]";
        }
        os << "]";
        return os.str();
    }
    friend bool operator==(const OrderPattern&, const OrderPattern&) = default;
};

/// The standard hereditary order of a shape: 0 on and above the block
/// diagonal, 1 below it.
inline OrderPattern standard_order(const BlockShape& shape) {
    const auto blk = shape.blocks();
    OrderPattern P(shape.R());
    for (int i = 0; i < P.R; ++i)
        for (int j = 0; j < P.R; ++j) P.at(i, j) = blk[i] <= blk[j] ? 0 : 1;
    return P;
}

/// Jacobson radical of the standard order: 1 on and below the block diagonal.
inline OrderPattern radical_pattern(const BlockShape& shape) {
    const auto blk = shape.blocks();
    OrderPattern P(shape.R());
    for (int i = 0; i < P.R; ++i)
        for (int j = 0; j < P.R; ++j) P.at(i, j) = blk[i] >= blk[j] ? 1 : 0;
    return P;
}

/// Entrywise maximum: the intersection of the two entry sets.
inline OrderPattern intersect_patterns(const OrderPattern& P, const OrderPattern& Q) {
    if (P.R != Q.R) throw ShapeError("pattern sizes differ");
    OrderPattern out(P.R);
    for (std::size_t t = 0; t < P.v.size(); ++t) out.v[t] = std::max(P.v[t], Q.v[t]);
    return out;
}

/// x = w d with d = diag(pi^{b_1}, ..., pi^{b_{e0}}) expanded over size-f
/// blocks and w permuting the f-blocks: x e_j = pi^{a_j} e_{s(j)}.
struct AffineWeylElem {
    int f = 1;
    std::vector<int> w;  // w[i] = image of f-block i
    std::vector<int> b;  // exponent of f-block i (applied before w)

    AffineWeylElem() = default;
    AffineWeylElem(int f_, std::vector<int> w_, std::vector<int> b_) : f(f_), w(std::move(w_)), b(std::move(b_)) {
        validate();
    }
    static AffineWeylElem identity(int f, int e0) {
        std::vector<int> w(e0);
        std::iota(w.begin(), w.end(), 0);
        return {f, w, std::vector<int>(e0, 0)};
    }

    int e0() const { return static_cast<int>(w.size()); }
    int R() const { return f * e0(); }

    void validate() const {
        if (f < 1) throw ShapeError("f must be positive");
        if (w.size() != b.size()) throw ShapeError("permutation and exponent vector differ in length");
        std::vector<int> sorted = w;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
            if (sorted[i] != i) throw ShapeError("w is not a permutation");
    }

    /// Expanded permutation s of {0, ..., R-1}.
    std::vector<int> perm() const {
        std::vector<int> s(R());
        for (int blk = 0; blk < e0(); ++blk)
            for (int t = 0; t < f; ++t) s[blk * f + t] = w[blk] * f + t;
        return s;
    }
    /// Expanded exponents a_j, constant on f-blocks.
    std::vector<int> exponents() const {
        std::vector<int> a(R());
        for (int j = 0; j < R(); ++j) a[j] = b[j / f];
        return a;
    }
    bool is_identity() const { return *this == identity(f, e0()); }

    AffineWeylElem inverse() const {
        std::vector<int> winv(e0()), binv(e0());
        for (int i = 0; i < e0(); ++i) winv[w[i]] = i;
        for (int k = 0; k < e0(); ++k) binv[k] = -b[winv[k]];
        return {f, winv, binv};
    }
    /// Product x y.
    friend AffineWeylElem operator*(const AffineWeylElem& x, const AffineWeylElem& y) {
        if (x.f != y.f || x.e0() != y.e0()) throw ShapeError("Weyl elements of different shapes");
        std::vector<int> w(x.e0()), b(x.e0());
        for (int j = 0; j < x.e0(); ++j) {
            w[j] = x.w[y.w[j]];
            b[j] = y.b[j] + x.b[y.w[j]];
        }
        return {x.f, w, b};
    }
    /// Multiply by the central element pi^c.
    AffineWeylElem shifted(int c) const {
        AffineWeylElem r = *this;
        for (auto& v : r.b) v += c;
        return r;
    }
    /// Central normalization: last exponent 0.
    AffineWeylElem centered() const { return shifted(-b.back()); }

    std::string to_string() const {
        std::ostringstream os;
        os << "w:";
        for (int i = 0; i < e0(); ++i) os << (i ? "," : "") << w[i];
        os << ";d:";
        for (int i = 0; i < e0(); ++i) os << (i ? "," : "") << b[i];
        return os.str();
    }
    friend bool operator==(const AffineWeylElem&, const AffineWeylElem&) = default;
    friend bool operator<(const AffineWeylElem& x, const AffineWeylElem& y) {
        return std::tie(x.f, x.w, x.b) < std::tie(y.f, y.w, y.b);
    }
};

/// Pattern of x A x^{-1} for A ranging over P:
/// v'(s(i), s(j)) = v(i,j) + a_i - a_j.
inline OrderPattern conjugate_pattern(const OrderPattern& P, const AffineWeylElem& x) {
    if (P.R != x.R()) throw ShapeError("pattern and Weyl element sizes differ");
    const auto s = x.perm();
    const auto a = x.exponents();
    OrderPattern out(P.R);
    for (int i = 0; i < P.R; ++i)
        for (int j = 0; j < P.R; ++j) out.at(s[i], s[j]) = P.at(i, j) + a[i] - a[j];
    return out;
}

/// All x = (w, b) with w in S_{e0} and b in Z^{e0}, b_{e0} = 0 and
/// |b_i| <= bound, ordered by (w, b).
inline std::vector<AffineWeylElem> weyl_representatives(int e0, int f, int bound) {
    if (e0 < 1 || bound < 0) throw ArgumentError("invalid representative parameters");
    std::vector<AffineWeylElem> out;
    for (const auto& w : permutations(e0)) {
        std::vector<int> b(e0, -bound);
        b.back() = 0;
        while (true) {
            out.emplace_back(f, w, b);
            int pos = e0 - 2;
            while (pos >= 0 && ++b[pos] > bound) b[pos--] = -bound;
            if (pos < 0) break;
        }
    }
    return out;
}

/// Largest |b_i - b_j|.
inline int exponent_spread(const AffineWeylElem& x) {
    const auto [lo, hi] = std::minmax_element(x.b.begin(), x.b.end());
    return *hi - *lo;
}

/// Whether the exponents are non-increasing inside every block of the shape.
inline bool satisfies_condition_D(const AffineWeylElem& x, const BlockShape& shape) {
    const auto units = shape.in_units_of(x.f);
    int start = 0;
    for (int u : units) {
        for (int i = start; i + 1 < start + u; ++i)
            if (x.b[i] < x.b[i + 1]) return false;
        start += u;
    }
    return true;
}

/// Returns x t for the permutation t of f-blocks inside each block of the
/// shape that stable-sorts the exponents into non-increasing order.
inline AffineWeylElem condition_D_normalize(const AffineWeylElem& x, const BlockShape& shape) {
    if (shape.R() != x.R()) throw ShapeError("shape and Weyl element sizes differ");
    const auto units = shape.in_units_of(x.f);
    std::vector<int> t(x.e0());
    std::iota(t.begin(), t.end(), 0);
    int start = 0;
    for (int u : units) {
        std::stable_sort(t.begin() + start, t.begin() + start + u, [&](int i, int j) { return x.b[i] > x.b[j]; });
        start += u;
    }
    AffineWeylElem tw(x.f, t, std::vector<int>(x.e0(), 0));
    return x * tw;
}

}  // namespace parahoric
