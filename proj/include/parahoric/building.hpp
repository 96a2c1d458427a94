#pragma once

// Truncated reduced building of GL_R over F_q((pi)): lattice classes in
// Hermite normal form, the ball of given radius around the standard vertex,
// its flag complex, and the simplex <-> hereditary order dictionary.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/field.hpp"
#include "parahoric/glq_group.hpp"
#include "parahoric/orders.hpp"

namespace parahoric {

inline constexpr int kMaxSeriesPrecision = 16;

/// Truncated power series sum c_i pi^i, i < precision.
struct Series {
    std::array<Fq, kMaxSeriesPrecision> c{};
    friend bool operator==(const Series&, const Series&) = default;
};

/// Arithmetic on Series at a fixed precision P.
class SeriesRing {
public:
    SeriesRing(FieldPtr field, int precision) : field_(std::move(field)), P_(precision) {
        if (P_ < 1 || P_ > kMaxSeriesPrecision) throw ArgumentError("series precision out of range");
    }
    const FieldSpec& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }
    int precision() const { return P_; }

    Series monomial(int e, Fq v = 1) const {
        Series s;
        if (e < P_) s.c[e] = v;
        return s;
    }
    int val(const Series& a) const {
        for (int i = 0; i < P_; ++i)
            if (a.c[i]) return i;
        return P_;
    }
    Series add(const Series& a, const Series& b) const {
        Series r;
        for (int i = 0; i < P_; ++i) r.c[i] = field_->add(a.c[i], b.c[i]);
        return r;
    }
    Series sub(const Series& a, const Series& b) const {
        Series r;
        for (int i = 0; i < P_; ++i) r.c[i] = field_->sub(a.c[i], b.c[i]);
        return r;
    }
    Series mul(const Series& a, const Series& b) const {
        Series r;
        for (int i = 0; i < P_; ++i) {
            if (!a.c[i]) continue;
            for (int j = 0; i + j < P_; ++j) r.c[i + j] = field_->add(r.c[i + j], field_->mul(a.c[i], b.c[j]));
        }
        return r;
    }
    /// a pi^n.
    Series shift_up(const Series& a, int n) const {
        Series r;
        for (int i = 0; i + n < P_; ++i) r.c[i + n] = a.c[i];
        return r;
    }
    /// a / pi^n; the low n coefficients must vanish.
    Series shift_down(const Series& a, int n) const {
        Series r;
        for (int i = 0; i < n && i < P_; ++i)
            if (a.c[i]) throw InvariantError("inexact division by a power of pi");
        for (int i = n; i < P_; ++i) r.c[i - n] = a.c[i];
        return r;
    }
    Series inverse(const Series& a) const {
        if (!a.c[0]) throw NotAUnitError("series is not a unit");
        Series y;
        const Fq a0inv = field_->inv(a.c[0]);
        y.c[0] = a0inv;
        for (int n = 1; n < P_; ++n) {
            Fq s = 0;
            for (int i = 1; i <= n; ++i) s = field_->add(s, field_->mul(a.c[i], y.c[n - i]));
            y.c[n] = field_->mul(field_->neg(s), a0inv);
        }
        return y;
    }

private:
    FieldPtr field_;
    int P_;
};

using SeriesVec = std::vector<Series>;

/// A lattice T with pi^P L_0 <= T <= L_0 in column Hermite normal form:
/// upper triangular basis, diagonal pi^{k_i}, entry (i, j) for i < j
/// reduced modulo pi^{k_i}.
struct Lattice {
    int R = 0;
    std::vector<int> k;
    std::vector<Series> B;  // row-major R x R, diagonal included when k_i < P

    const Series& at(int i, int j) const { return B[i * R + j]; }
    SeriesVec column(int j) const {
        SeriesVec v(R);
        for (int i = 0; i < R; ++i) v[i] = at(i, j);
        return v;
    }
    int profile() const {
        int s = 0;
        for (int v : k) s += v;
        return s;
    }
    /// Normal form: k, then the reduced above-diagonal coefficients.
    std::vector<int> key() const {
        std::vector<int> out(k.begin(), k.end());
        for (int i = 0; i < R; ++i)
            for (int j = i + 1; j < R; ++j)
                for (int t = 0; t < k[i]; ++t) out.push_back(at(i, j).c[t]);
        return out;
    }
};

/// Hermite normal form of the module spanned by the columns and pi^P L_0.
inline Lattice hnf(const SeriesRing& S, int R, std::vector<SeriesVec> cols) {
    const int P = S.precision();
    Lattice L;
    L.R = R;
    L.k.assign(R, P);
    L.B.assign(static_cast<std::size_t>(R) * R, Series{});
    std::vector<SeriesVec> pivots(R, SeriesVec(R));
    for (int i = R - 1; i >= 0; --i) {
        int best = -1, best_val = P;
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            const int v = S.val(cols[c][i]);
            if (v < best_val) best_val = v, best = c;
        }
        if (best < 0) {
            L.k[i] = P;
            continue;
        }
        SeriesVec p = cols[best];
        cols.erase(cols.begin() + best);
        const Series u = S.inverse(S.shift_down(p[i], best_val));
        for (auto& e : p) e = S.mul(e, u);
        for (auto& col : cols) {
            if (S.val(col[i]) >= P) continue;
            const Series q = S.shift_down(col[i], best_val);
            for (int r = 0; r <= i; ++r) col[r] = S.sub(col[r], S.mul(q, p[r]));
        }
        L.k[i] = best_val;
        pivots[i] = p;
    }
    // Reduce above-diagonal entries of each pivot column modulo the diagonal.
    for (int j = 0; j < R; ++j) {
        SeriesVec col = pivots[j];
        for (int i = j - 1; i >= 0; --i) {
            if (L.k[i] >= P) continue;
            Series low, high;
            for (int t = 0; t < P; ++t) (t < L.k[i] ? low : high).c[t] = col[i].c[t];
            if (S.val(high) >= P) continue;
            const Series q = S.shift_down(high, L.k[i]);
            for (int r = 0; r <= i; ++r) col[r] = S.sub(col[r], S.mul(q, pivots[i][r]));
        }
        for (int i = 0; i <= j; ++i) L.B[i * R + j] = col[i];
    }
    return L;
}

/// Whether v lies in L (which contains pi^P L_0); on success `coords`
/// receives c with sum_j c_j column_j = v modulo pi^P.
inline bool lattice_contains(const SeriesRing& S, const Lattice& L, SeriesVec v, SeriesVec* coords = nullptr) {
    const int P = S.precision();
    if (coords) coords->assign(L.R, Series{});
    for (int i = L.R - 1; i >= 0; --i) {
        const int vi = S.val(v[i]);
        if (vi >= P) continue;
        if (vi < L.k[i]) return false;
        const Series c = S.shift_down(v[i], L.k[i]);
        for (int r = 0; r <= i; ++r) v[r] = S.sub(v[r], S.mul(c, L.at(r, i)));
        if (coords) (*coords)[i] = c;
    }
    return true;
}

/// pi^n L, valid while every k_i + n stays below the precision.
inline Lattice lattice_scaled(const SeriesRing& S, const Lattice& L, int n) {
    Lattice out = L;
    for (int i = 0; i < L.R; ++i) {
        if (L.k[i] + n > S.precision()) throw SizeLimitError("scaled lattice exceeds the working precision");
        out.k[i] = L.k[i] + n;
    }
    for (auto& e : out.B) e = S.shift_up(e, n);
    return out;
}

/// Whether every column of A lies in B.
inline bool lattice_subset(const SeriesRing& S, const Lattice& A, const Lattice& B) {
    for (int j = 0; j < A.R; ++j)
        if (!lattice_contains(S, B, A.column(j))) return false;
    return true;
}

/// Homothety representative inside L_0 and not inside pi L_0.
inline Lattice normalize_class(const SeriesRing& S, const Lattice& L) {
    int m = S.precision();
    for (int i = 0; i < L.R; ++i) {
        m = std::min(m, L.k[i]);
        for (int j = i + 1; j < L.R; ++j) m = std::min(m, S.val(L.at(i, j)));
    }
    Lattice out = L;
    for (int i = 0; i < L.R; ++i) out.k[i] -= m;
    for (auto& e : out.B) e = S.shift_down(e, m);
    return out;
}

/// Least t with pi^t L_0 <= L: the distance of a normalized lattice class
/// from the standard vertex.
inline int elementary_spread(const SeriesRing& S, const Lattice& L) {
    for (int t = 0; t < S.precision(); ++t) {
        bool all = true;
        for (int j = 0; j < L.R && all; ++j) {
            SeriesVec e(L.R);
            e[j] = S.monomial(t);
            all = lattice_contains(S, L, e);
        }
        if (all) return t;
    }
    return S.precision();
}

/// Proper nonzero subspaces of F_q^R as bases in reduced row echelon form.
inline std::vector<std::vector<std::vector<Fq>>> proper_subspaces(int R, int q) {
    std::vector<std::vector<std::vector<Fq>>> out;
    for (int d = 1; d < R; ++d) {
        for (unsigned mask = 0; mask < (1u << R); ++mask) {
            if (std::popcount(mask) != d) continue;
            std::vector<int> piv;
            for (int j = 0; j < R; ++j)
                if (mask & (1u << j)) piv.push_back(j);
            std::vector<std::pair<int, int>> free;
            for (int t = 0; t < d; ++t)
                for (int j = piv[t] + 1; j < R; ++j)
                    if (!(mask & (1u << j))) free.emplace_back(t, j);
            std::vector<Fq> digits(free.size(), 0);
            while (true) {
                std::vector<std::vector<Fq>> basis(d, std::vector<Fq>(R, 0));
                for (int t = 0; t < d; ++t) basis[t][piv[t]] = 1;
                for (std::size_t s = 0; s < free.size(); ++s) basis[free[s].first][free[s].second] = digits[s];
                out.push_back(std::move(basis));
                std::size_t pos = 0;
                while (pos < digits.size() && ++digits[pos] == q) digits[pos++] = 0;
                if (pos == digits.size()) break;
            }
        }
    }
    return out;
}

/// Stabilizer order of a simplex, written in a basis adapted to its chain.
struct SimplexOrder {
    OrderPattern pattern;     // standard order of `shape` in the adapted basis
    BlockShape shape;
    std::vector<SeriesVec> basis;  // adapted basis vectors (columns), integral
    std::vector<std::vector<Fq>> residue_basis;  // the same in coordinates of the chain top
    std::vector<Lattice> chain;    // scaled representatives, decreasing
};

/// Size limits of a truncation. Raising them is allowed up to rank 4 and
/// radius 4, where the working precision 3r + 2 still fits a Series.
struct BuildingLimits {
    int max_R = 3;
    int max_radius = 2;
};

inline constexpr int kBuildingRankCap = 4;
inline constexpr int kBuildingRadiusCap = 4;

class TruncatedComplex {
public:
    TruncatedComplex(int R, FieldPtr field, int radius, BuildingLimits limits = {})
        : R_(checked_rank(R, limits)), radius_(checked_radius(radius, limits)), ring_(field, 3 * radius + 2) {
        build();
    }

    int R() const { return R_; }
    int radius() const { return radius_; }
    const SeriesRing& ring() const { return ring_; }
    const FieldPtr& field() const { return ring_.field_ptr(); }
    const std::vector<Lattice>& vertices() const { return vertices_; }
    const std::vector<int>& distances() const { return dist_; }
    /// Simplices of each dimension as ascending vertex-index lists.
    const std::vector<std::vector<std::vector<int>>>& simplices() const { return simplices_; }
    const std::vector<std::vector<int>>& simplices(int dim) const { return simplices_.at(dim); }
    int dimension() const { return static_cast<int>(simplices_.size()) - 1; }
    bool adjacent(int u, int v) const { return adj_[u].count(v) > 0; }
    const std::set<int>& neighbors(int v) const { return adj_[v]; }
    int index_of(const Lattice& L) const {
        auto it = index_.find(L.key());
        return it == index_.end() ? -1 : it->second;
    }
    bool has_simplex(const std::vector<int>& s) const {
        std::vector<int> t = s;
        std::sort(t.begin(), t.end());
        const int d = static_cast<int>(t.size()) - 1;
        if (d < 0 || d > dimension()) return false;
        return std::binary_search(simplices_[d].begin(), simplices_[d].end(), t);
    }

    /// Neighbor classes of a normalized lattice, normalized.
    std::vector<Lattice> neighbor_lattices(const Lattice& L) const {
        std::vector<Lattice> out;
        for (const auto& U : subspaces_) {
            std::vector<SeriesVec> gens;
            for (int j = 0; j < R_; ++j) {
                SeriesVec c = L.column(j);
                for (auto& e : c) e = ring_.shift_up(e, 1);
                gens.push_back(c);
            }
            for (const auto& u : U) {
                SeriesVec v(R_);
                for (int j = 0; j < R_; ++j) {
                    if (!u[j]) continue;
                    const auto col = L.column(j);
                    for (int i = 0; i < R_; ++i) v[i] = ring_.add(v[i], ring_.mul(ring_.monomial(0, u[j]), col[i]));
                }
                gens.push_back(v);
            }
            out.push_back(normalize_class(ring_, hnf(ring_, R_, gens)));
        }
        return out;
    }

    /// Representatives pi A <= C_m < ... < C_1 < C_0 = A of a simplex.
    std::vector<Lattice> chain_of(const std::vector<int>& simplex) const {
        const Lattice& A = vertices_.at(simplex.front());
        const Lattice piA = lattice_scaled(ring_, A, 1);
        std::vector<Lattice> reps{A};
        for (std::size_t t = 1; t < simplex.size(); ++t) {
            const Lattice& B = vertices_.at(simplex[t]);
            bool placed = false;
            for (int n = 0; n <= 2 * radius_ + 1 && !placed; ++n) {
                const Lattice Bn = lattice_scaled(ring_, B, n);
                if (!lattice_subset(ring_, Bn, A)) continue;
                if (!lattice_subset(ring_, piA, Bn)) throw InvariantError("simplex vertices are not a lattice chain");
                reps.push_back(Bn);
                placed = true;
            }
            if (!placed) throw InvariantError("no scaling of a vertex fits inside the base lattice");
        }
        std::sort(reps.begin() + 1, reps.end(), [](const Lattice& x, const Lattice& y) { return x.profile() < y.profile(); });
        for (std::size_t t = 1; t < reps.size(); ++t)
            if (reps[t].profile() == reps[t - 1].profile() || !lattice_subset(ring_, reps[t], reps[t - 1]))
                throw InvariantError("simplex vertices are not totally ordered");
        return reps;
    }

    /// Stabilizer order of the chain in a basis adapted to it.
    SimplexOrder simplex_order(const std::vector<int>& simplex) const {
        const auto& F = ring_.field();
        SimplexOrder so;
        so.chain = chain_of(simplex);
        const Lattice& A = so.chain.front();
        // Images of the chain members in A / pi A, in coordinates of A's basis.
        std::vector<std::vector<std::vector<Fq>>> images;
        for (std::size_t t = 1; t < so.chain.size(); ++t) {
            std::vector<std::vector<Fq>> rows;
            for (int j = 0; j < R_; ++j) {
                SeriesVec coords;
                if (!lattice_contains(ring_, A, so.chain[t].column(j), &coords)) throw InvariantError("chain member escapes A");
                std::vector<Fq> r(R_);
                for (int i = 0; i < R_; ++i) r[i] = coords[i].c[0];
                rows.push_back(r);
            }
            images.push_back(rows);
        }
        // Adapted basis of F_q^R: smallest subspace first.
        std::vector<std::vector<Fq>> adapted;
        std::vector<int> dims;
        auto extend = [&](const std::vector<std::vector<Fq>>& span) {
            for (const auto& v : span) {
                auto trial = adapted;
                trial.push_back(v);
                std::vector<Fq> flat;
                for (const auto& w : trial) flat.insert(flat.end(), w.begin(), w.end());
                if (MatOps::rank_of(F, flat, static_cast<int>(trial.size()), R_) == static_cast<int>(trial.size()))
                    adapted.push_back(v);
            }
            dims.push_back(static_cast<int>(adapted.size()));
        };
        for (auto it = images.rbegin(); it != images.rend(); ++it) extend(*it);
        std::vector<std::vector<Fq>> unit(R_, std::vector<Fq>(R_, 0));
        for (int i = 0; i < R_; ++i) unit[i][i] = 1;
        extend(unit);
        std::vector<int> parts;
        int prev = 0;
        for (int d : dims) {
            if (d == prev) throw InvariantError("chain images are not strictly increasing");
            parts.push_back(d - prev);
            prev = d;
        }
        so.shape = BlockShape(parts);
        so.pattern = standard_order(so.shape);
        so.residue_basis = adapted;
        for (const auto& u : adapted) {
            SeriesVec v(R_);
            for (int j = 0; j < R_; ++j) {
                if (!u[j]) continue;
                for (int i = 0; i <= j; ++i) v[i] = ring_.add(v[i], ring_.mul(ring_.monomial(0, u[j]), A.at(i, j)));
            }
            so.basis.push_back(v);
        }
        return so;
    }

    /// Whether every element of the simplex's order maps the vertex lattice
    /// L into itself: with P the adapted basis and z = pi^r P^{-1} w for the
    /// basis vectors w of L, each generator pi^{v(k,l)} E_kl must send z into
    /// pi^r P^{-1} L.
    bool order_stabilizes(const SimplexOrder& so, const Lattice& L) const {
        const int r = radius_;
        const Lattice& A = so.chain.front();
        const Lattice target = lattice_scaled(ring_, L, r);
        // Coordinates in the adapted basis: solve in A's basis, then undo
        // the residue change of basis U (columns = adapted vectors).
        std::vector<Fq> Uflat(static_cast<std::size_t>(R_) * R_);
        for (int k = 0; k < R_; ++k)
            for (int j = 0; j < R_; ++j) Uflat[j * R_ + k] = so.residue_basis[k][j];
        const auto Uinv = residue_inverse(ring_.field(), Uflat, R_);
        for (int j = 0; j < R_; ++j) {
            SeriesVec w = L.column(j);
            for (auto& e : w) e = ring_.shift_up(e, r);
            SeriesVec c;
            if (!lattice_contains(ring_, A, w, &c)) throw InvariantError("pi^r L escapes the chain top");
            SeriesVec z(R_);
            for (int k = 0; k < R_; ++k)
                for (int t = 0; t < R_; ++t)
                    if (Uinv[k * R_ + t]) z[k] = ring_.add(z[k], ring_.mul(ring_.monomial(0, Uinv[k * R_ + t]), c[t]));
            for (int k = 0; k < R_; ++k)
                for (int l = 0; l < R_; ++l) {
                    const Series coef = ring_.shift_up(z[l], so.pattern.at(k, l));
                    if (ring_.val(coef) >= ring_.precision()) continue;
                    SeriesVec u(R_);
                    for (int i = 0; i < R_; ++i) u[i] = ring_.mul(coef, so.basis[k][i]);
                    if (!lattice_contains(ring_, target, u)) return false;
                }
        }
        return true;
    }

    /// Vertices of the ball fixed by the simplex's order.
    std::vector<int> stabilized_vertices(const std::vector<int>& simplex) const {
        const auto so = simplex_order(simplex);
        std::vector<int> out;
        for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
            if (order_stabilizes(so, vertices_[v])) out.push_back(v);
        return out;
    }

private:
    void build() {
        subspaces_ = proper_subspaces(R_, ring_.field().q());
        Lattice L0;
        L0.R = R_;
        L0.k.assign(R_, 0);
        L0.B.assign(static_cast<std::size_t>(R_) * R_, Series{});
        for (int i = 0; i < R_; ++i) L0.B[i * R_ + i] = ring_.monomial(0);

        std::map<std::vector<int>, int> found;
        std::vector<Lattice> lats{L0};
        std::vector<int> dist{0};
        found[L0.key()] = 0;
        std::vector<std::set<int>> adj(1);
        for (std::size_t head = 0; head < lats.size(); ++head) {
            const Lattice cur = lats[head];
            for (const auto& nb : neighbor_lattices(cur)) {
                const auto key = nb.key();
                auto it = found.find(key);
                int id;
                if (it == found.end()) {
                    if (dist[head] + 1 > radius_) continue;
                    id = static_cast<int>(lats.size());
                    found[key] = id;
                    lats.push_back(nb);
                    dist.push_back(dist[head] + 1);
                    adj.emplace_back();
                } else {
                    id = it->second;
                }
                adj[head].insert(id);
                adj[id].insert(static_cast<int>(head));
            }
        }
        // Canonical order: (valuation profile, normal form).
        std::vector<int> order(lats.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::make_pair(lats[a].profile(), lats[a].key()) < std::make_pair(lats[b].profile(), lats[b].key());
        });
        std::vector<int> pos(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
        for (int old : order) {
            vertices_.push_back(lats[old]);
            dist_.push_back(dist[old]);
            std::set<int> a;
            for (int n : adj[old]) a.insert(pos[n]);
            adj_.push_back(a);
        }
        for (std::size_t i = 0; i < vertices_.size(); ++i) index_[vertices_[i].key()] = static_cast<int>(i);

        // Flag complex: cliques, each checked to be a lattice chain.
        simplices_.assign(1, {});
        for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) simplices_[0].push_back({v});
        for (int d = 1;; ++d) {
            std::vector<std::vector<int>> next;
            for (const auto& s : simplices_[d - 1])
                for (int w : adj_[s.back()]) {
                    if (w <= s.back()) continue;
                    bool ok = true;
                    for (int u : s) ok = ok && adj_[u].count(w);
                    if (!ok) continue;
                    auto t = s;
                    t.push_back(w);
                    next.push_back(t);
                }
            if (next.empty()) break;
            if (d > R_ - 1) throw InvariantError("clique larger than a chamber");
            std::sort(next.begin(), next.end());
            for (const auto& s : next) chain_of(s);
            simplices_.push_back(std::move(next));
        }
    }

    int R_;
    int radius_;
    SeriesRing ring_;
    std::vector<std::vector<std::vector<Fq>>> subspaces_;
    std::vector<Lattice> vertices_;
    std::vector<int> dist_;
    std::vector<std::set<int>> adj_;
    std::map<std::vector<int>, int> index_;
    std::vector<std::vector<std::vector<int>>> simplices_;

    static int checked_rank(int R, const BuildingLimits& lim) {
        if (R < 1 || R > std::min(lim.max_R, kBuildingRankCap)) throw SizeLimitError("building rank out of range");
        return R;
    }
    static int checked_radius(int r, const BuildingLimits& lim) {
        if (r < 0 || r > std::min(lim.max_radius, kBuildingRadiusCap)) throw SizeLimitError("radius out of range");
        return r;
    }
};

inline TruncatedComplex truncated_building(int R, const FieldPtr& field, int radius, BuildingLimits limits = {}) {
    return {R, field, radius, limits};
}

/// Pattern of the stabilizer order in the adapted basis of the simplex.
inline OrderPattern simplex_order_dictionary(const TruncatedComplex& X, const std::vector<int>& simplex) {
    return X.simplex_order(simplex).pattern;
}

/// The vertex Lambda_m = span(e_1..e_m) + pi L_0 of the standard chamber,
/// 1 <= m <= R (Lambda_R = L_0), as a normalized lattice.
inline Lattice standard_chamber_vertex(const TruncatedComplex& X, int m) {
    const auto& S = X.ring();
    std::vector<SeriesVec> gens;
    for (int j = 0; j < X.R(); ++j) {
        SeriesVec v(X.R());
        v[j] = S.monomial(j < m ? 0 : 1);
        gens.push_back(v);
    }
    return normalize_class(S, hnf(S, X.R(), gens));
}

}  // namespace parahoric
