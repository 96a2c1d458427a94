#pragma once

// Exact character tables of fully enumerated groups by the class-algebra
// eigenvector method: class-multiplication coefficients are computed exactly,
// their common eigenvectors are split over a prime field F_l with
// l = 1 mod exponent, and the reduced character values are lifted to
// Z[zeta_m] through eigenvalue multiplicities of each element.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "parahoric/cyclotomic.hpp"
#include "parahoric/errors.hpp"
#include "parahoric/glq_group.hpp"

namespace parahoric {

using GroupPtr = std::shared_ptr<const FiniteGroupTable>;

inline GroupPtr make_group(int n, const FieldPtr& field, long bound = -1) {
    return std::make_shared<const FiniteGroupTable>(conjugacy_classes(n, field, bound));
}

/// A class function: one exact value per conjugacy class.
struct ClassFunction {
    GroupPtr group;
    std::vector<CycValue> values;

    const CycValue& operator[](int cls) const { return values[cls]; }
    std::int64_t degree() const { return values.at(0).rational_value(); }

    friend bool operator==(const ClassFunction& a, const ClassFunction& b) { return a.values == b.values; }
};

/// (1/|G|) sum_g a(g) conj(b(g)), exact.
inline CycValue inner_product(const ClassFunction& a, const ClassFunction& b) {
    const FiniteGroupTable& G = *a.group;
    CycValue s;
    for (int c = 0; c < G.num_classes(); ++c) s += CycValue(G.classes()[c].size) * a[c] * b[c].conj();
    return s.divide_exact(G.order());
}

inline ClassFunction trivial_character(const GroupPtr& G) {
    return {G, std::vector<CycValue>(G->num_classes(), CycValue(1))};
}

namespace detail {

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}
inline std::int64_t mod_inv(std::int64_t a, std::int64_t m) { return mod_pow(a, m - 2, m); }

inline std::int64_t primitive_root(std::int64_t ell) {
    std::vector<std::int64_t> factors;
    std::int64_t t = ell - 1;
    for (std::int64_t d = 2; d * d <= t; ++d)
        if (t % d == 0) {
            factors.push_back(d);
            while (t % d == 0) t /= d;
        }
    if (t > 1) factors.push_back(t);
    for (std::int64_t g = 2; g < ell; ++g) {
        bool ok = true;
        for (auto f : factors)
            if (mod_pow(g, (ell - 1) / f, ell) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw InvariantError("no primitive root");
}

/// Smallest prime l = 1 (mod m) with l > 2 sqrt(order) + 2 and l not dividing order.
inline std::int64_t dixon_prime(std::int64_t m, std::int64_t order) {
    const double lower = 2.0 * std::sqrt(static_cast<double>(order)) + 2.0;
    for (std::int64_t ell = m + 1;; ell += m)
        if (ell > lower && is_prime(ell) && order % ell != 0) return ell;
}

// Column vectors over F_l, kept in reduced echelon form: basis vector t has a
// 1 in row pivot[t] and 0 in the pivot rows of the other vectors.
struct ModSubspace {
    std::vector<std::vector<std::int64_t>> basis;
    std::vector<int> pivot;
};

inline ModSubspace echelonize(std::vector<std::vector<std::int64_t>> vecs, std::int64_t ell) {
    ModSubspace S;
    for (auto& v : vecs) {
        for (std::size_t t = 0; t < S.basis.size(); ++t) {
            const std::int64_t c = v[S.pivot[t]];
            if (c == 0) continue;
            for (std::size_t r = 0; r < v.size(); ++r) v[r] = ((v[r] - c * S.basis[t][r]) % ell + ell) % ell;
        }
        int p = -1;
        for (std::size_t r = 0; r < v.size(); ++r)
            if (v[r] != 0) {
                p = static_cast<int>(r);
                break;
            }
        if (p < 0) continue;
        const std::int64_t s = mod_inv(v[p], ell);
        for (auto& x : v) x = x * s % ell;
        for (auto& b : S.basis) {
            const std::int64_t c = b[p];
            if (c == 0) continue;
            for (std::size_t r = 0; r < b.size(); ++r) b[r] = ((b[r] - c * v[r]) % ell + ell) % ell;
        }
        S.basis.push_back(std::move(v));
        S.pivot.push_back(p);
    }
    return S;
}

/// Null space of a d x d matrix over F_l.
inline std::vector<std::vector<std::int64_t>> null_space(std::vector<std::vector<std::int64_t>> a, std::int64_t ell) {
    const int d = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int piv = -1;
        for (int r = row; r < d; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[row], a[piv]);
        const std::int64_t s = mod_inv(a[row][col], ell);
        for (auto& x : a[row]) x = x * s % ell;
        for (int r = 0; r < d; ++r) {
            if (r == row || a[r][col] == 0) continue;
            const std::int64_t c = a[r][col];
            for (int j = 0; j < d; ++j) a[r][j] = ((a[r][j] - c * a[row][j]) % ell + ell) % ell;
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(d, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<std::int64_t>> out;
    for (int free = 0; free < d; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::int64_t> v(d, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = (ell - a[r][free]) % ell;
        out.push_back(std::move(v));
    }
    return out;
}

/// Characteristic polynomial det(tI - C) over F_l (Faddeev-LeVerrier; l > d).
inline std::vector<std::int64_t> char_poly_mod(const std::vector<std::vector<std::int64_t>>& C, std::int64_t ell) {
    const int d = static_cast<int>(C.size());
    auto matmul = [&](const std::vector<std::vector<std::int64_t>>& x, const std::vector<std::vector<std::int64_t>>& y) {
        std::vector<std::vector<std::int64_t>> r(d, std::vector<std::int64_t>(d, 0));
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                if (x[i][k] == 0) continue;
                for (int j = 0; j < d; ++j) r[i][j] = (r[i][j] + x[i][k] * y[k][j]) % ell;
            }
        return r;
    };
    std::vector<std::int64_t> c(d + 1, 0);
    c[d] = 1;
    std::vector<std::vector<std::int64_t>> Mk(d, std::vector<std::int64_t>(d, 0));  // M_0 = 0
    for (int k = 1; k <= d; ++k) {
        auto AM = matmul(C, Mk);
        for (int i = 0; i < d; ++i) AM[i][i] = (AM[i][i] + c[d - k + 1]) % ell;
        Mk = AM;
        auto AMk = matmul(C, Mk);
        std::int64_t tr = 0;
        for (int i = 0; i < d; ++i) tr = (tr + AMk[i][i]) % ell;
        c[d - k] = (ell - tr * mod_inv(k, ell) % ell) % ell;
    }
    return c;
}

}  // namespace detail

/// Complete list of irreducible characters of a group, ordered by
/// (degree, lexicographic value vector).
struct CharacterTable {
    GroupPtr group;
    std::vector<ClassFunction> chars;
    std::int64_t prime = 0;  // auxiliary prime used for the eigenvector computation

    int size() const { return static_cast<int>(chars.size()); }
    const ClassFunction& operator[](int i) const { return chars[i]; }
};

/// Class-multiplication coefficients a[j][i][k] = #{x in C_i : x^{-1} z_k in C_j}.
inline std::vector<std::vector<std::vector<std::int64_t>>> class_constants(const FiniteGroupTable& G) {
    const int k = G.num_classes();
    const auto& ops = G.ops();
    const auto& el = G.elements();
    std::vector<int> inv_class_idx(el.size());
    std::vector<MatCode> inv_el(el.size());
    for (std::size_t i = 0; i < el.size(); ++i) inv_el[i] = ops.inverse(el[i]);
    std::vector<std::vector<std::vector<std::int64_t>>> a(
        k, std::vector<std::vector<std::int64_t>>(k, std::vector<std::int64_t>(k, 0)));
    for (int kk = 0; kk < k; ++kk) {
        const MatCode z = G.class_rep(kk);
        for (std::size_t x = 0; x < el.size(); ++x) {
            const int i = G.class_of_index(static_cast<int>(x));
            const int j = G.class_of(ops.mul(inv_el[x], z));
            ++a[j][i][kk];
        }
    }
    return a;
}

inline CharacterTable character_table(const GroupPtr& Gp) {
    const FiniteGroupTable& G = *Gp;
    const int k = G.num_classes();
    const std::int64_t order = G.order();
    const std::int64_t m = G.exponent();
    const std::int64_t ell = detail::dixon_prime(m, order);
    const auto a = class_constants(G);

    // Split F_l^k into common eigenlines of the matrices A_j[i][kk] = a[j][i][kk].
    std::vector<detail::ModSubspace> spaces;
    {
        std::vector<std::vector<std::int64_t>> id;
        for (int i = 0; i < k; ++i) {
            std::vector<std::int64_t> v(k, 0);
            v[i] = 1;
            id.push_back(v);
        }
        spaces.push_back(detail::echelonize(id, ell));
    }
    for (int j = 0; j < k && static_cast<int>(spaces.size()) < k; ++j) {
        std::vector<detail::ModSubspace> next;
        for (auto& S : spaces) {
            const int d = static_cast<int>(S.basis.size());
            if (d == 1) {
                next.push_back(std::move(S));
                continue;
            }
            // Matrix of A_j on S in the echelon basis.
            std::vector<std::vector<std::int64_t>> C(d, std::vector<std::int64_t>(d, 0));
            for (int t = 0; t < d; ++t) {
                std::vector<std::int64_t> w(k, 0);
                for (int i = 0; i < k; ++i)
                    for (int kk = 0; kk < k; ++kk) w[i] = (w[i] + a[j][i][kk] % ell * S.basis[t][kk]) % ell;
                for (int s = 0; s < d; ++s) C[s][t] = w[S.pivot[s]];
            }
            const auto cp = detail::char_poly_mod(C, ell);
            int total = 0;
            for (std::int64_t lam = 0; lam < ell && total < d; ++lam) {
                std::int64_t v = 0;
                for (int i = d; i >= 0; --i) v = (v * lam + cp[i]) % ell;
                if (v != 0) continue;
                auto CL = C;
                for (int i = 0; i < d; ++i) CL[i][i] = (CL[i][i] - lam + ell) % ell;
                const auto ns = detail::null_space(CL, ell);
                std::vector<std::vector<std::int64_t>> vecs;
                for (const auto& y : ns) {
                    std::vector<std::int64_t> x(k, 0);
                    for (int t = 0; t < d; ++t)
                        if (y[t] != 0)
                            for (int r = 0; r < k; ++r) x[r] = (x[r] + y[t] * S.basis[t][r]) % ell;
                    vecs.push_back(std::move(x));
                }
                total += static_cast<int>(vecs.size());
                next.push_back(detail::echelonize(std::move(vecs), ell));
            }
            if (total != d) throw InvariantError("class algebra is not split over the auxiliary prime field");
        }
        spaces = std::move(next);
    }
    if (static_cast<int>(spaces.size()) != k) throw InvariantError("eigenvector splitting did not terminate in lines");

    std::vector<std::int64_t> csize(k);
    for (int c = 0; c < k; ++c) csize[c] = G.classes()[c].size;

    const std::int64_t z = detail::mod_pow(detail::primitive_root(ell), (ell - 1) / m, ell);
    // Power maps: class of g_c^t, for t in [0, order(g_c)).
    std::vector<std::vector<int>> powers(k);
    for (int c = 0; c < k; ++c) {
        const int o = G.classes()[c].element_order;
        MatCode g = G.class_rep(c), x = G.ops().identity();
        for (int t = 0; t < o; ++t) {
            powers[c].push_back(G.class_of(x));
            x = G.ops().mul(x, g);
        }
    }

    CharacterTable T;
    T.group = Gp;
    T.prime = ell;
    for (const auto& S : spaces) {
        std::vector<std::int64_t> omega = S.basis[0];
        if (omega[0] == 0) throw InvariantError("central character vanishes on the identity class");
        const std::int64_t s = detail::mod_inv(omega[0], ell);
        for (auto& x : omega) x = x * s % ell;
        std::int64_t sum = 0;
        for (int c = 0; c < k; ++c)
            sum = (sum + omega[c] * omega[G.inverse_class(c)] % ell * detail::mod_inv(csize[c] % ell, ell)) % ell;
        const std::int64_t d2 = order % ell * detail::mod_inv(sum, ell) % ell;
        std::int64_t deg = 0;
        for (std::int64_t d = 1; d * d <= order; ++d)
            if (d * d % ell == d2) {
                deg = d;
                break;
            }
        if (deg == 0) throw InvariantError("no degree matches the class-algebra eigenvector");
        std::vector<std::int64_t> chi_mod(k);
        for (int c = 0; c < k; ++c) chi_mod[c] = deg * omega[c] % ell * detail::mod_inv(csize[c] % ell, ell) % ell;

        ClassFunction chi{Gp, {}};
        for (int c = 0; c < k; ++c) {
            const int o = G.classes()[c].element_order;
            const std::int64_t zo = detail::mod_pow(z, m / o, ell);
            const std::int64_t zo_inv = detail::mod_inv(zo, ell);
            const std::int64_t o_inv = detail::mod_inv(o, ell);
            std::vector<std::int64_t> e(o, 0);
            std::int64_t check = 0;
            for (int u = 0; u < o; ++u) {
                std::int64_t mu = 0;
                const std::int64_t step = detail::mod_pow(zo_inv, u, ell);
                std::int64_t w = 1;
                for (int t = 0; t < o; ++t) {
                    mu = (mu + chi_mod[powers[c][t]] * w) % ell;
                    w = w * step % ell;
                }
                mu = mu * o_inv % ell;
                if (mu > deg) throw InvariantError("eigenvalue multiplicity out of range");
                e[u] = mu;
                check += mu;
            }
            if (check != deg) throw InvariantError("eigenvalue multiplicities do not sum to the degree");
            chi.values.push_back(CycValue::from_exponent_vector(o, e));
        }
        T.chars.push_back(std::move(chi));
    }
    std::sort(T.chars.begin(), T.chars.end(), [](const ClassFunction& x, const ClassFunction& y) {
        if (x.degree() != y.degree()) return x.degree() < y.degree();
        return std::lexicographical_compare(x.values.begin(), x.values.end(), y.values.begin(), y.values.end(),
                                            [](const CycValue& u, const CycValue& v) { return lex_less(u, v); });
    });
    return T;
}

/// Exact first and second orthogonality relations and sum of squared degrees.
inline bool verify_orthogonality(const CharacterTable& T) {
    const FiniteGroupTable& G = *T.group;
    const int k = G.num_classes();
    if (T.size() != k) return false;
    std::int64_t sq = 0;
    for (const auto& chi : T.chars) sq += chi.degree() * chi.degree();
    if (sq != G.order()) return false;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
            if (!(inner_product(T[i], T[j]) == CycValue(i == j ? 1 : 0))) return false;
    for (int c = 0; c < k; ++c)
        for (int d = c; d < k; ++d) {
            CycValue s;
            for (int i = 0; i < k; ++i) s += T[i][c] * T[i][d].conj();
            const CycValue expected(c == d ? G.order() / G.classes()[c].size : 0);
            if (!(s == expected)) return false;
        }
    return true;
}

/// Memoized groups and tables keyed by (n, p, k); thread-safe.
class TableCache {
public:
    static TableCache& instance() {
        static TableCache cache;
        return cache;
    }

    std::shared_ptr<const CharacterTable> table(int n, const FieldPtr& field) {
        const auto key = std::make_tuple(n, field->p(), field->k());
        std::shared_ptr<Slot> slot;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto& s = slots_[key];
            if (!s) s = std::make_shared<Slot>();
            slot = s;
        }
        std::call_once(slot->once, [&] {
            slot->table = std::make_shared<const CharacterTable>(character_table(make_group(n, field)));
        });
        return slot->table;
    }

private:
    struct Slot {
        std::once_flag once;
        std::shared_ptr<const CharacterTable> table;
    };
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, std::shared_ptr<Slot>> slots_;
};

}  // namespace parahoric
