#pragma once

// GL_n(F_q) for small n and q: matrices packed into 64-bit codes, full
// enumeration, conjugacy classes by orbit computation, and a similarity-class
// key that identifies classes without enumerating the group.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/field.hpp"

namespace parahoric {

using MatCode = std::uint64_t;

inline constexpr long kDefaultGroupBound = 25000;

/// Group-size bound, overridable through PARAHORIC_LAB_MAX_GROUP.
inline long group_bound() {
    if (const char* env = std::getenv("PARAHORIC_LAB_MAX_GROUP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return kDefaultGroupBound;
}

/// |GL_n(F_q)| = prod_{i<n} (q^n - q^i).
inline long gl_order(int n, int q) {
    long qn = 1;
    for (int i = 0; i < n; ++i) qn *= q;
    long order = 1, qi = 1;
    for (int i = 0; i < n; ++i, qi *= q) order *= (qn - qi);
    return order;
}

/// Arithmetic on n x n matrices over F_q (n <= 4) packed as 4-bit digits.
class MatOps {
public:
    MatOps(FieldPtr field, int n) : field_(std::move(field)), n_(n) {
        if (n < 1 || n > 4) throw ShapeError("matrix size must lie in [1,4]");
    }

    int n() const { return n_; }
    const FieldSpec& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }

    static Fq get(MatCode c, int idx) { return static_cast<Fq>((c >> (4 * idx)) & 0xF); }
    static MatCode set(MatCode c, int idx, Fq v) {
        return (c & ~(MatCode{0xF} << (4 * idx))) | (MatCode{v} << (4 * idx));
    }
    Fq at(MatCode c, int i, int j) const { return get(c, i * n_ + j); }

    MatCode identity() const {
        MatCode c = 0;
        for (int i = 0; i < n_; ++i) c = set(c, i * n_ + i, 1);
        return c;
    }
    MatCode encode(const std::vector<Fq>& a) const {
        MatCode c = 0;
        for (int i = 0; i < n_ * n_; ++i) c = set(c, i, a[i]);
        return c;
    }
    std::vector<Fq> decode(MatCode c) const {
        std::vector<Fq> a(n_ * n_);
        for (int i = 0; i < n_ * n_; ++i) a[i] = get(c, i);
        return a;
    }

    MatCode mul(MatCode a, MatCode b) const {
        const FieldSpec& F = *field_;
        MatCode r = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                Fq s = 0;
                for (int k = 0; k < n_; ++k) s = F.add(s, F.mul(at(a, i, k), at(b, k, j)));
                r = set(r, i * n_ + j, s);
            }
        return r;
    }
    MatCode inverse(MatCode a) const { return encode(residue_inverse(*field_, decode(a), n_)); }

    int rank(std::vector<Fq> a) const { return rank_of(*field_, std::move(a), n_, n_); }
    Fq det(MatCode c) const {
        const FieldSpec& F = *field_;
        std::vector<Fq> a = decode(c);
        Fq d = 1;
        for (int col = 0; col < n_; ++col) {
            int piv = -1;
            for (int r = col; r < n_; ++r)
                if (a[r * n_ + col] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            if (piv != col) {
                for (int j = 0; j < n_; ++j) std::swap(a[col * n_ + j], a[piv * n_ + j]);
                d = F.neg(d);
            }
            const Fq pv = a[col * n_ + col];
            d = F.mul(d, pv);
            const Fq pinv = F.inv(pv);
            for (int r = col + 1; r < n_; ++r) {
                const Fq c2 = F.mul(a[r * n_ + col], pinv);
                if (c2 == 0) continue;
                for (int j = col; j < n_; ++j) a[r * n_ + j] = F.sub(a[r * n_ + j], F.mul(c2, a[col * n_ + j]));
            }
        }
        return d;
    }

    static int rank_of(const FieldSpec& F, std::vector<Fq> a, int rows, int cols) {
        int rank = 0;
        for (int col = 0; col < cols && rank < rows; ++col) {
            int piv = -1;
            for (int r = rank; r < rows; ++r)
                if (a[r * cols + col] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) continue;
            for (int j = 0; j < cols; ++j) std::swap(a[rank * cols + j], a[piv * cols + j]);
            const Fq pinv = F.inv(a[rank * cols + col]);
            for (int r = rank + 1; r < rows; ++r) {
                const Fq c = F.mul(a[r * cols + col], pinv);
                if (c == 0) continue;
                for (int j = col; j < cols; ++j) a[r * cols + j] = F.sub(a[r * cols + j], F.mul(c, a[rank * cols + j]));
            }
            ++rank;
        }
        return rank;
    }

    /// A generating set of GL_n(F_q): transvections I + b E_ij for b in an
    /// F_p-basis, and diag(g, 1, ..., 1) for a generator g of F_q^x.
    std::vector<MatCode> generators() const {
        std::vector<MatCode> gens;
        const MatCode id = identity();
        for (Fq b : field_->prime_basis())
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    if (i != j) gens.push_back(set(id, i * n_ + j, b));
        if (field_->q() > 2) gens.push_back(set(id, 0, field_->generator()));
        return gens;
    }

private:
    FieldPtr field_;
    int n_;
};

struct ConjugacyClass {
    int rep = 0;          // index of the representative in the element list
    long size = 0;
    int element_order = 1;
};

/// Fully enumerated GL_n(F_q) with its conjugacy classes.
class FiniteGroupTable {
public:
    const MatOps& ops() const { return ops_; }
    int n() const { return ops_.n(); }
    int q() const { return ops_.field().q(); }
    long order() const { return static_cast<long>(elements_.size()); }
    int exponent() const { return exponent_; }
    const std::vector<MatCode>& elements() const { return elements_; }
    const std::vector<ConjugacyClass>& classes() const { return classes_; }
    int num_classes() const { return static_cast<int>(classes_.size()); }

    int index_of(MatCode c) const {
        auto it = index_.find(c);
        if (it == index_.end()) throw InvariantError("matrix is not an element of the group");
        return it->second;
    }
    int class_of_index(int idx) const { return class_of_[idx]; }
    int class_of(MatCode c) const { return class_of_[index_of(c)]; }
    MatCode class_rep(int cls) const { return elements_[classes_[cls].rep]; }
    /// Class containing the inverses of class `cls`.
    int inverse_class(int cls) const { return inverse_class_[cls]; }
    /// Class of g^t for g in class `cls`.
    int power_class(int cls, long t) const {
        MatCode g = class_rep(cls), r = ops_.identity();
        const int o = classes_[cls].element_order;
        t = ((t % o) + o) % o;
        for (long i = 0; i < t; ++i) r = ops_.mul(r, g);
        return class_of(r);
    }
    /// Center: scalar matrices.
    std::vector<int> center_classes() const {
        std::vector<int> out;
        for (int c = 0; c < num_classes(); ++c)
            if (classes_[c].size == 1) out.push_back(c);
        return out;
    }

    friend FiniteGroupTable conjugacy_classes(int n, const FieldPtr& field, long bound);

private:
    explicit FiniteGroupTable(MatOps ops) : ops_(std::move(ops)) {}

    MatOps ops_;
    std::vector<MatCode> elements_;
    std::unordered_map<MatCode, int> index_;
    std::vector<int> class_of_;
    std::vector<ConjugacyClass> classes_;
    std::vector<int> inverse_class_;
    int exponent_ = 1;
};

/// Enumerates GL_n(F_q) and partitions it into conjugacy classes by orbit
/// computation under conjugation by a generating set.
///
/// Classes are ordered by (element order, class size, least element code),
/// so the identity class comes first.
inline FiniteGroupTable conjugacy_classes(int n, const FieldPtr& field, long bound = -1) {
    if (bound < 0) bound = group_bound();
    const long expected = gl_order(n, field->q());
    if (expected > bound)
        throw SizeLimitError("|GL_" + std::to_string(n) + "(F_" + std::to_string(field->q()) + ")| = " +
                             std::to_string(expected) + " exceeds bound " + std::to_string(bound));
    FiniteGroupTable G{MatOps(field, n)};
    const MatOps& ops = G.ops_;
    const int q = field->q();

    // Odometer over all q^{n^2} matrices, keeping the invertible ones.
    std::vector<Fq> digits(n * n, 0);
    while (true) {
        const MatCode c = ops.encode(digits);
        if (ops.det(c) != 0) G.elements_.push_back(c);
        int pos = 0;
        while (pos < n * n && ++digits[pos] == q) digits[pos++] = 0;
        if (pos == n * n) break;
    }
    std::sort(G.elements_.begin(), G.elements_.end());
    if (static_cast<long>(G.elements_.size()) != expected)
        throw InvariantError("GL order mismatch: enumerated " + std::to_string(G.elements_.size()) + ", expected " +
                             std::to_string(expected));
    G.index_.reserve(G.elements_.size() * 2);
    for (int i = 0; i < static_cast<int>(G.elements_.size()); ++i) G.index_[G.elements_[i]] = i;

    std::vector<MatCode> gens = ops.generators();
    std::vector<MatCode> gens_inv;
    for (auto g : gens) gens_inv.push_back(ops.inverse(g));

    const int N = static_cast<int>(G.elements_.size());
    G.class_of_.assign(N, -1);
    std::vector<std::vector<int>> orbits;
    for (int start = 0; start < N; ++start) {
        if (G.class_of_[start] >= 0) continue;
        const int cid = static_cast<int>(orbits.size());
        std::vector<int> orbit{start};
        G.class_of_[start] = cid;
        for (std::size_t head = 0; head < orbit.size(); ++head) {
            const MatCode x = G.elements_[orbit[head]];
            for (std::size_t s = 0; s < gens.size(); ++s) {
                const MatCode y = ops.mul(ops.mul(gens[s], x), gens_inv[s]);
                const int yi = G.index_.at(y);
                if (G.class_of_[yi] < 0) {
                    G.class_of_[yi] = cid;
                    orbit.push_back(yi);
                }
            }
        }
        orbits.push_back(std::move(orbit));
    }

    auto element_order = [&](MatCode g) {
        int o = 1;
        MatCode x = g;
        const MatCode id = ops.identity();
        while (x != id) {
            x = ops.mul(x, g);
            ++o;
        }
        return o;
    };
    std::vector<ConjugacyClass> raw;
    for (const auto& orb : orbits) {
        const int rep = *std::min_element(orb.begin(), orb.end());
        raw.push_back({rep, static_cast<long>(orb.size()), element_order(G.elements_[rep])});
    }
    std::vector<int> perm(raw.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        if (raw[a].element_order != raw[b].element_order) return raw[a].element_order < raw[b].element_order;
        if (raw[a].size != raw[b].size) return raw[a].size < raw[b].size;
        return raw[a].rep < raw[b].rep;
    });
    std::vector<int> new_id(raw.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        new_id[perm[i]] = static_cast<int>(i);
        G.classes_.push_back(raw[perm[i]]);
    }
    for (auto& c : G.class_of_) c = new_id[c];

    long total = 0;
    for (const auto& c : G.classes_) {
        total += c.size;
        G.exponent_ = std::lcm(G.exponent_, c.element_order);
    }
    if (total != N) throw InvariantError("class sizes do not sum to the group order");
    G.inverse_class_.resize(G.classes_.size());
    for (int c = 0; c < G.num_classes(); ++c) G.inverse_class_[c] = G.class_of(ops.inverse(G.class_rep(c)));
    return G;
}

// ---------------------------------------------------------------------------
// Similarity-class keys.

namespace detail {

// Polynomials over F_q, constant term first.
using PolyQ = std::vector<Fq>;

inline void trim_q(PolyQ& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyQ polyq_mul(const FieldSpec& F, const PolyQ& a, const PolyQ& b) {
    if (a.empty() || b.empty()) return {};
    PolyQ r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    trim_q(r);
    return r;
}

inline PolyQ polyq_sub(const FieldSpec& F, PolyQ a, const PolyQ& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    trim_q(a);
    return a;
}

/// Division with remainder by a monic divisor.
inline std::pair<PolyQ, PolyQ> polyq_divmod(const FieldSpec& F, PolyQ a, const PolyQ& m) {
    trim_q(a);
    const int dm = static_cast<int>(m.size()) - 1;
    if (static_cast<int>(a.size()) - 1 < dm) return {{}, a};
    PolyQ quot(a.size() - dm, 0);
    while (static_cast<int>(a.size()) - 1 >= dm) {
        const int shift = static_cast<int>(a.size()) - 1 - dm;
        const Fq c = a.back();
        quot[shift] = c;
        for (int i = 0; i <= dm; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, m[i]));
        trim_q(a);
    }
    return {quot, a};
}

}  // namespace detail

/// Monic irreducible polynomials over F_q of degree 1..max_degree, in a fixed order.
inline std::vector<detail::PolyQ> monic_irreducibles(const FieldSpec& F, int max_degree) {
    using detail::PolyQ;
    std::vector<PolyQ> irr;
    const int q = F.q();
    for (int d = 1; d <= max_degree; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= q;
        for (long v = 0; v < count; ++v) {
            PolyQ f(d + 1, 0);
            long t = v;
            for (int i = 0; i < d; ++i, t /= q) f[i] = static_cast<Fq>(t % q);
            f[d] = 1;
            bool reducible = false;
            for (const auto& g : irr) {
                if (2 * (static_cast<int>(g.size()) - 1) > d) break;
                if (detail::polyq_divmod(F, f, g).second.empty()) {
                    reducible = true;
                    break;
                }
            }
            if (!reducible) irr.push_back(f);
        }
    }
    return irr;
}

/// Complete invariant of the GL_n(F_q)-conjugacy class of an invertible matrix:
/// for each monic irreducible factor f of the characteristic polynomial with
/// multiplicity m, the ranks of f(A)^k for k = 1..m.
class SimilarityKeyer {
public:
    explicit SimilarityKeyer(MatOps ops) : ops_(std::move(ops)), irreducibles_(monic_irreducibles(ops_.field(), ops_.n())) {}

    const MatOps& ops() const { return ops_; }

    std::vector<int> key(MatCode c) const {
        using detail::PolyQ;
        const FieldSpec& F = ops_.field();
        const int n = ops_.n();
        PolyQ chi = charpoly(c);
        std::vector<int> out;
        for (std::size_t fi = 0; fi < irreducibles_.size(); ++fi) {
            const PolyQ& f = irreducibles_[fi];
            int mult = 0;
            while (true) {
                auto [quot, rem] = detail::polyq_divmod(F, chi, f);
                if (!rem.empty()) break;
                chi = quot;
                ++mult;
            }
            if (mult == 0) continue;
            out.push_back(static_cast<int>(fi));
            out.push_back(mult);
            const std::vector<Fq> fa = eval_poly(f, c);
            std::vector<Fq> power = fa;
            for (int k = 1; k <= mult; ++k) {
                out.push_back(MatOps::rank_of(F, power, n, n));
                if (k < mult) power = matmul(power, fa);
            }
        }
        return out;
    }

    detail::PolyQ charpoly(MatCode c) const {
        // det(tI - A) by Laplace expansion over F_q[t].
        using detail::PolyQ;
        const FieldSpec& F = ops_.field();
        const int n = ops_.n();
        std::vector<PolyQ> m(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                PolyQ e{F.neg(ops_.at(c, i, j))};
                if (i == j) e = {F.neg(ops_.at(c, i, j)), 1};
                detail::trim_q(e);
                m[i * n + j] = e;
            }
        std::vector<int> cols(n);
        std::iota(cols.begin(), cols.end(), 0);
        return laplace(m, n, 0, cols);
    }

private:
    detail::PolyQ laplace(const std::vector<detail::PolyQ>& m, int n, int row, const std::vector<int>& cols) const {
        using detail::PolyQ;
        const FieldSpec& F = ops_.field();
        if (row == n) return PolyQ{1};
        PolyQ acc;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const PolyQ& e = m[row * n + cols[k]];
            if (e.empty()) continue;
            std::vector<int> rest;
            for (std::size_t t = 0; t < cols.size(); ++t)
                if (t != k) rest.push_back(cols[t]);
            PolyQ term = detail::polyq_mul(F, e, laplace(m, n, row + 1, rest));
            if (k % 2 == 1) acc = detail::polyq_sub(F, acc, term);
            else acc = detail::polyq_sub(F, acc, detail::polyq_sub(F, {}, term));
        }
        return acc;
    }

    std::vector<Fq> matmul(const std::vector<Fq>& a, const std::vector<Fq>& b) const {
        const FieldSpec& F = ops_.field();
        const int n = ops_.n();
        std::vector<Fq> r(n * n, 0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (a[i * n + k] == 0) continue;
                for (int j = 0; j < n; ++j) r[i * n + j] = F.add(r[i * n + j], F.mul(a[i * n + k], b[k * n + j]));
            }
        return r;
    }

    std::vector<Fq> eval_poly(const detail::PolyQ& f, MatCode c) const {
        // Horner.
        const FieldSpec& F = ops_.field();
        const int n = ops_.n();
        const std::vector<Fq> a = ops_.decode(c);
        std::vector<Fq> r(n * n, 0);
        for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
            r = matmul(r, a);
            for (int d = 0; d < n; ++d) r[d * n + d] = F.add(r[d * n + d], f[i]);
        }
        return r;
    }

    MatOps ops_;
    std::vector<detail::PolyQ> irreducibles_;
};

}  // namespace parahoric
