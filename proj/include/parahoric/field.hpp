#pragma once

// Exact arithmetic over F_q and over the truncated local ring F_q[pi]/(pi^M).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parahoric/errors.hpp"

namespace parahoric {

using Fq = std::uint8_t;  // element of F_q, q <= 16: base-p digits of the residue polynomial

inline constexpr int kDefaultFieldBound = 16;

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// The finite field F_q, q = p^k, realised as F_p[x]/(modulus).
///
/// Elements are encoded as integers in [0, q): the base-p digits are the
/// coefficients of the residue polynomial, constant term first. All
/// operations are table lookups.
class FieldSpec {
public:
    int p() const { return p_; }
    int k() const { return k_; }
    int q() const { return q_; }
    /// Monic modulus, coefficients c_0..c_k over F_p.
    const std::vector<int>& modulus() const { return modulus_; }

    Fq add(Fq a, Fq b) const { return add_[a * q_ + b]; }
    Fq mul(Fq a, Fq b) const { return mul_[a * q_ + b]; }
    Fq neg(Fq a) const { return neg_[a]; }
    Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
    Fq inv(Fq a) const {
        if (a == 0) throw NotAUnitError("inverse of zero in F_q");
        return inv_[a];
    }
    /// A generator of the cyclic group F_q^x.
    Fq generator() const { return generator_; }
    /// F_p-basis {1, x, ..., x^{k-1}} of F_q.
    std::vector<Fq> prime_basis() const {
        std::vector<Fq> out;
        int v = 1;
        for (int i = 0; i < k_; ++i, v *= p_) out.push_back(static_cast<Fq>(v));
        return out;
    }

    friend std::shared_ptr<const FieldSpec> make_field(int p, int k, int bound);

private:
    FieldSpec() = default;

    int p_ = 0, k_ = 0, q_ = 0;
    std::vector<int> modulus_;
    std::vector<Fq> add_, mul_, neg_, inv_;
    Fq generator_ = 1;
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

namespace detail {

// Polynomials over F_p as coefficient vectors, constant term first.
using PolyP = std::vector<int>;

inline void trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP poly_mod(PolyP a, const PolyP& m, int p) {
    trim(a);
    const int dm = static_cast<int>(m.size()) - 1;
    int lead_inv = 1;
    while ((lead_inv * m.back()) % p != 1) ++lead_inv;
    while (static_cast<int>(a.size()) - 1 >= dm) {
        const int shift = static_cast<int>(a.size()) - 1 - dm;
        const int c = (a.back() * lead_inv) % p;
        for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

inline PolyP digits(long v, int p, int len) {
    PolyP out(len);
    for (int i = 0; i < len; ++i, v /= p) out[i] = static_cast<int>(v % p);
    return out;
}

inline bool irreducible_by_trial(const PolyP& f, int p) {
    const int deg = static_cast<int>(f.size()) - 1;
    for (int d = 1; 2 * d <= deg; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long v = 0; v < count; ++v) {
            PolyP g = digits(v, p, d);
            g.push_back(1);
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Builds F_{p^k} using the lexicographically least monic irreducible modulus
/// (coefficients compared from x^{k-1} down to the constant term).
inline FieldPtr make_field(int p, int k, int bound = kDefaultFieldBound) {
    using namespace detail;
    if (!is_prime(p)) throw ArgumentError("characteristic " + std::to_string(p) + " is not prime");
    if (k < 1) throw ArgumentError("field degree must be positive");
    long q = 1;
    for (int i = 0; i < k; ++i) q *= p;
    if (q > bound) throw SizeLimitError("field order " + std::to_string(q) + " exceeds bound " + std::to_string(bound));

    auto f = std::shared_ptr<FieldSpec>(new FieldSpec());
    f->p_ = p;
    f->k_ = k;
    f->q_ = static_cast<int>(q);

    bool found = false;
    for (long v = 0; v < q && !found; ++v) {
        PolyP cand = digits(v, p, k);
        cand.push_back(1);
        if (irreducible_by_trial(cand, p)) {
            f->modulus_ = cand;
            found = true;
        }
    }
    if (!found) throw InvariantError("no irreducible polynomial found");

    const int Q = f->q_;
    f->add_.resize(Q * Q);
    f->mul_.resize(Q * Q);
    f->neg_.resize(Q);
    f->inv_.assign(Q, 0);
    auto encode = [&](const PolyP& a) {
        long v = 0, w = 1;
        for (int i = 0; i < k; ++i, w *= p) v += (i < static_cast<int>(a.size()) ? a[i] : 0) * w;
        return static_cast<Fq>(v);
    };
    for (int a = 0; a < Q; ++a) {
        const PolyP pa = digits(a, p, k);
        PolyP na(k);
        for (int i = 0; i < k; ++i) na[i] = (p - pa[i]) % p;
        f->neg_[a] = encode(na);
        for (int b = 0; b < Q; ++b) {
            const PolyP pb = digits(b, p, k);
            PolyP s(k), m(2 * k, 0);
            for (int i = 0; i < k; ++i) s[i] = (pa[i] + pb[i]) % p;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) m[i + j] = (m[i + j] + pa[i] * pb[j]) % p;
            f->add_[a * Q + b] = encode(s);
            f->mul_[a * Q + b] = encode(poly_mod(m, f->modulus_, p));
        }
    }
    for (int a = 1; a < Q; ++a)
        for (int b = 1; b < Q; ++b)
            if (f->mul_[a * Q + b] == 1) f->inv_[a] = static_cast<Fq>(b);
    for (int g = 1; g < Q; ++g) {
        int order = 1;
        Fq x = static_cast<Fq>(g);
        while (x != 1) {
            x = f->mul_[x * Q + g];
            ++order;
        }
        if (order == Q - 1) {
            f->generator_ = static_cast<Fq>(g);
            break;
        }
    }
    return f;
}

/// F_q for a prime power q.
inline FieldPtr field_of_order(int q, int bound = kDefaultFieldBound) {
    for (int p = 2; p <= q; ++p) {
        if (!is_prime(p) || q % p != 0) continue;
        int k = 0;
        long v = 1;
        while (v < q) v *= p, ++k;
        if (v != q) break;
        return make_field(p, k, bound);
    }
    throw ArgumentError("q = " + std::to_string(q) + " is not a prime power");
}

/// Element of F_q[pi]/(pi^M): coefficients of pi^0 .. pi^{M-1}.
class TruncRingElem {
public:
    TruncRingElem(FieldPtr field, int level) : field_(std::move(field)), coeffs_(level, 0) {
        if (level < 1) throw ArgumentError("truncation level must be >= 1");
    }
    TruncRingElem(FieldPtr field, std::vector<Fq> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw ArgumentError("truncation level must be >= 1");
    }
    static TruncRingElem constant(FieldPtr field, int level, Fq c) {
        TruncRingElem e(std::move(field), level);
        e.coeffs_[0] = c;
        return e;
    }
    static TruncRingElem monomial(FieldPtr field, int level, int exponent, Fq c = 1) {
        TruncRingElem e(std::move(field), level);
        if (exponent < level) e.coeffs_[exponent] = c;
        return e;
    }

    int level() const { return static_cast<int>(coeffs_.size()); }
    const FieldPtr& field() const { return field_; }
    std::span<const Fq> coeffs() const { return coeffs_; }
    Fq operator[](int i) const { return coeffs_[i]; }
    Fq residue() const { return coeffs_[0]; }
    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](Fq c) { return c == 0; });
    }
    bool is_unit() const { return coeffs_[0] != 0; }

    friend TruncRingElem operator+(const TruncRingElem& a, const TruncRingElem& b) {
        a.check_compatible(b);
        TruncRingElem r(a.field_, a.level());
        for (int i = 0; i < a.level(); ++i) r.coeffs_[i] = a.field_->add(a.coeffs_[i], b.coeffs_[i]);
        return r;
    }
    friend TruncRingElem operator-(const TruncRingElem& a, const TruncRingElem& b) {
        a.check_compatible(b);
        TruncRingElem r(a.field_, a.level());
        for (int i = 0; i < a.level(); ++i) r.coeffs_[i] = a.field_->sub(a.coeffs_[i], b.coeffs_[i]);
        return r;
    }
    friend TruncRingElem operator*(const TruncRingElem& a, const TruncRingElem& b) {
        a.check_compatible(b);
        const int M = a.level();
        TruncRingElem r(a.field_, M);
        const auto& F = *a.field_;
        for (int i = 0; i < M; ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (int j = 0; i + j < M; ++j)
                r.coeffs_[i + j] = F.add(r.coeffs_[i + j], F.mul(a.coeffs_[i], b.coeffs_[j]));
        }
        return r;
    }
    friend bool operator==(const TruncRingElem& a, const TruncRingElem& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    void check_compatible(const TruncRingElem& b) const {
        if (level() != b.level()) throw ArgumentError("truncation levels differ");
    }

    FieldPtr field_;
    std::vector<Fq> coeffs_;
};

/// Least index of a nonzero coefficient; the level M for zero.
inline int valuation(const TruncRingElem& x) {
    for (int i = 0; i < x.level(); ++i)
        if (x[i] != 0) return i;
    return x.level();
}

/// Inverse of a unit of F_q[pi]/(pi^M).
inline TruncRingElem inverse(const TruncRingElem& x) {
    if (!x.is_unit()) throw NotAUnitError("element has positive valuation");
    const auto& F = *x.field();
    const int M = x.level();
    std::vector<Fq> y(M, 0);
    const Fq a0inv = F.inv(x[0]);
    y[0] = a0inv;
    for (int n = 1; n < M; ++n) {
        Fq s = 0;
        for (int i = 1; i <= n; ++i) s = F.add(s, F.mul(x[i], y[n - i]));
        y[n] = F.mul(F.neg(s), a0inv);
    }
    return TruncRingElem(x.field(), std::move(y));
}

/// Square matrix over F_q[pi]/(pi^M).
class TruncMatrix {
public:
    TruncMatrix(FieldPtr field, int dim, int level)
        : field_(std::move(field)), dim_(dim), level_(level),
          entries_(static_cast<std::size_t>(dim) * dim, TruncRingElem(field_, level)) {}

    static TruncMatrix identity(FieldPtr field, int dim, int level) {
        TruncMatrix m(field, dim, level);
        for (int i = 0; i < dim; ++i) m.at(i, i) = TruncRingElem::constant(field, level, 1);
        return m;
    }

    int dim() const { return dim_; }
    int level() const { return level_; }
    const FieldPtr& field() const { return field_; }
    TruncRingElem& at(int i, int j) { return entries_[i * dim_ + j]; }
    const TruncRingElem& at(int i, int j) const { return entries_[i * dim_ + j]; }

    friend TruncMatrix operator*(const TruncMatrix& a, const TruncMatrix& b) {
        if (a.dim_ != b.dim_ || a.level_ != b.level_) throw ShapeError("matrix shapes differ");
        TruncMatrix r(a.field_, a.dim_, a.level_);
        for (int i = 0; i < a.dim_; ++i)
            for (int j = 0; j < a.dim_; ++j) {
                TruncRingElem s(a.field_, a.level_);
                for (int k = 0; k < a.dim_; ++k) s = s + a.at(i, k) * b.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }
    friend TruncMatrix operator-(const TruncMatrix& a, const TruncMatrix& b) {
        TruncMatrix r(a.field_, a.dim_, a.level_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i) r.entries_[i] = a.entries_[i] - b.entries_[i];
        return r;
    }
    friend TruncMatrix operator+(const TruncMatrix& a, const TruncMatrix& b) {
        TruncMatrix r(a.field_, a.dim_, a.level_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i) r.entries_[i] = a.entries_[i] + b.entries_[i];
        return r;
    }
    friend bool operator==(const TruncMatrix& a, const TruncMatrix& b) {
        return a.dim_ == b.dim_ && a.level_ == b.level_ && a.entries_ == b.entries_;
    }

private:
    FieldPtr field_;
    int dim_;
    int level_;
    std::vector<TruncRingElem> entries_;
};

/// Inverse of a square matrix over F_q given as a row-major array; throws
/// NotAUnitError when singular.
inline std::vector<Fq> residue_inverse(const FieldSpec& F, std::vector<Fq> a, int n) {
    std::vector<Fq> inv(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r * n + col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw NotAUnitError("residue matrix is singular");
        for (int j = 0; j < n; ++j) {
            std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(inv[col * n + j], inv[piv * n + j]);
        }
        const Fq s = F.inv(a[col * n + col]);
        for (int j = 0; j < n; ++j) {
            a[col * n + j] = F.mul(a[col * n + j], s);
            inv[col * n + j] = F.mul(inv[col * n + j], s);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r * n + col] == 0) continue;
            const Fq c = a[r * n + col];
            for (int j = 0; j < n; ++j) {
                a[r * n + j] = F.sub(a[r * n + j], F.mul(c, a[col * n + j]));
                inv[r * n + j] = F.sub(inv[r * n + j], F.mul(c, inv[col * n + j]));
            }
        }
    }
    return inv;
}

/// Inverse over F_q[pi]/(pi^M): residue inverse, then Newton lifting
/// B <- B(2I - AB) until AB = I at the full level.
inline TruncMatrix mat_invert(const TruncMatrix& A) {
    const int n = A.dim();
    const int M = A.level();
    const auto& field = A.field();
    std::vector<Fq> res(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) res[i * n + j] = A.at(i, j).residue();
    const std::vector<Fq> res_inv = residue_inverse(*field, res, n);

    TruncMatrix B(field, n, M);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B.at(i, j) = TruncRingElem::constant(field, M, res_inv[i * n + j]);
    const TruncMatrix I = TruncMatrix::identity(field, n, M);
    // Each step doubles the pi-adic precision of B.
    for (int prec = 1; prec < M; prec *= 2) B = B * (I + (I - A * B));
    if (!(A * B == I) || !(B * A == I)) throw InvariantError("mat_invert: lifting failed");
    return B;
}

}  // namespace parahoric
