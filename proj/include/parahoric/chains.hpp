#pragma once

// Oriented simplicial chains on a truncated building with values in
// coordinate-subspace coefficient systems, the boundary map and the
// augmentation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "parahoric/building.hpp"
#include "parahoric/errors.hpp"

namespace parahoric {

/// Sparse integer vector: ambient coordinate -> nonzero value.
using CoeffVec = std::map<int, std::int64_t>;

inline void add_into(CoeffVec& acc, const CoeffVec& v, std::int64_t scale) {
    for (const auto& [k, x] : v) {
        const auto it = acc.find(k);
        const std::int64_t s = (it == acc.end() ? 0 : it->second) + scale * x;
        if (s == 0) {
            if (it != acc.end()) acc.erase(it);
        } else {
            acc[k] = s;
        }
    }
}

/// Sign of the permutation sorting `t` (which has distinct entries).
inline int sort_sign(std::vector<int>& t) {
    int sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i)
        for (std::size_t j = i; j > 0 && t[j - 1] > t[j]; --j) {
            std::swap(t[j - 1], t[j]);
            sign = -sign;
        }
    return sign;
}

/// A coefficient system whose space at each simplex is spanned by a subset
/// of ambient coordinates; transition maps to faces are inclusions.
class CoefficientSystem {
public:
    virtual ~CoefficientSystem() = default;
    virtual std::string name() const = 0;
    /// Ambient coordinates spanning the space attached to `simplex` (sorted).
    virtual std::vector<int> basis(const std::vector<int>& simplex) const = 0;

    bool contains(const std::vector<int>& simplex, const CoeffVec& v) const {
        const auto b = basis(simplex);
        for (const auto& [k, x] : v)
            if (!std::binary_search(b.begin(), b.end(), k)) return false;
        return true;
    }
};

/// The constant system with one-dimensional coefficients.
class ScalarSystem final : public CoefficientSystem {
public:
    std::string name() const override { return "scalar"; }
    std::vector<int> basis(const std::vector<int>&) const override { return {0}; }
};

/// Coordinates are vertices; the space at a simplex is spanned by the
/// vertices equal or adjacent to all of its vertices. Larger simplices get
/// smaller spaces, so the face maps are inclusions.
class NeighborSystem final : public CoefficientSystem {
public:
    explicit NeighborSystem(const TruncatedComplex& X) : X_(&X) {}
    std::string name() const override { return "neighbor"; }
    std::vector<int> basis(const std::vector<int>& simplex) const override {
        std::vector<int> out;
        for (int v = 0; v < static_cast<int>(X_->vertices().size()); ++v) {
            bool ok = true;
            for (int s : simplex)
                if (s != v && !X_->adjacent(s, v)) {
                    ok = false;
                    break;
                }
            if (ok) out.push_back(v);
        }
        return out;
    }

private:
    const TruncatedComplex* X_;
};

/// Finitely supported alternating function on oriented simplices of one
/// dimension; stored on vertex-sorted simplices.
class OrientedChain {
public:
    explicit OrientedChain(int level) : level_(level) {}

    int level() const { return level_; }
    const std::map<std::vector<int>, CoeffVec>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds v at the oriented simplex `tuple` (any vertex order).
    void add(std::vector<int> tuple, const CoeffVec& v, std::int64_t scale = 1) {
        if (static_cast<int>(tuple.size()) != level_ + 1) throw ArgumentError("simplex size does not match chain level");
        const int s = sort_sign(tuple);
        if (std::adjacent_find(tuple.begin(), tuple.end()) != tuple.end()) throw ArgumentError("repeated vertex in simplex");
        auto& slot = terms_[tuple];
        add_into(slot, v, s * scale);
        if (slot.empty()) terms_.erase(tuple);
    }

    /// Value at the oriented simplex `tuple`: the stored value times the sign
    /// of the sorting permutation.
    CoeffVec value(std::vector<int> tuple) const {
        const int s = sort_sign(tuple);
        const auto it = terms_.find(tuple);
        if (it == terms_.end()) return {};
        CoeffVec out;
        add_into(out, it->second, s);
        return out;
    }

    bool operator==(const OrientedChain&) const = default;

private:
    int level_;
    std::map<std::vector<int>, CoeffVec> terms_;
};

/// Checks that every value lies in the coefficient space of its simplex.
inline bool chain_in_system(const OrientedChain& w, const CoefficientSystem& C) {
    for (const auto& [s, v] : w.terms())
        if (!C.contains(s, v)) return false;
    return true;
}

/// (d w)(<s_0..s_{q-1}>) = sum over s of w(<s, s_0..s_{q-1}>), with the
/// inclusion of coefficient spaces into the face.
inline OrientedChain boundary(const TruncatedComplex& X, const OrientedChain& w) {
    if (w.level() < 1 || w.level() > X.dimension()) throw ArgumentError("boundary level out of range");
    OrientedChain out(w.level() - 1);
    for (const auto& [t, v] : w.terms()) {
        if (!X.has_simplex(t)) throw ArgumentError("chain supported outside the complex");
        for (std::size_t i = 0; i < t.size(); ++i) {
            auto face = t;
            face.erase(face.begin() + static_cast<long>(i));
            out.add(face, v, (i % 2 == 0) ? 1 : -1);
        }
    }
    return out;
}

inline CoeffVec augmentation(const OrientedChain& w) {
    if (w.level() != 0) throw ArgumentError("augmentation needs a 0-chain");
    CoeffVec out;
    for (const auto& [s, v] : w.terms()) add_into(out, v, 1);
    return out;
}

struct SimplicialCheckReport {
    int R = 0, q = 0, radius = 0;
    std::string system;
    std::size_t vertices = 0;
    std::vector<std::size_t> simplex_counts;  // by dimension
    std::int64_t dd_basis = 0, dd_failures = 0;
    std::int64_t eps_basis = 0, eps_failures = 0;
    std::int64_t sign_checks = 0, sign_failures = 0;
    std::int64_t inclusion_checks = 0, inclusion_failures = 0;
    std::int64_t reversal_pairs = 0, reversal_failures = 0;

    bool passed() const {
        return dd_failures == 0 && eps_failures == 0 && sign_failures == 0 && inclusion_failures == 0 &&
               reversal_failures == 0;
    }
};

/// Simplicial identities on full chain bases of X for one coefficient
/// system, the sign rule, face inclusions and the order dictionary's
/// inclusion reversal over all pairs of simplices.
inline SimplicialCheckReport simplicial_checks(const TruncatedComplex& X, const CoefficientSystem& C) {
    SimplicialCheckReport rep;
    rep.R = X.R();
    rep.q = X.field()->q();
    rep.radius = X.radius();
    rep.system = C.name();
    rep.vertices = X.vertices().size();
    for (const auto& level : X.simplices()) rep.simplex_counts.push_back(level.size());

    for (int d = 0; d <= X.dimension(); ++d)
        for (const auto& s : X.simplices(d)) {
            const auto b = C.basis(s);
            for (int k : b) {
                OrientedChain w(d);
                w.add(s, CoeffVec{{k, 1}});
                if (d >= 2) {
                    ++rep.dd_basis;
                    if (!boundary(X, boundary(X, w)).is_zero()) ++rep.dd_failures;
                }
                if (d == 1) {
                    ++rep.eps_basis;
                    if (!augmentation(boundary(X, w)).empty()) ++rep.eps_failures;
                }
                if (d >= 1 && !chain_in_system(boundary(X, w), C)) ++rep.inclusion_failures;
            }
            // Sign rule under every vertex permutation.
            OrientedChain w(d);
            w.add(s, CoeffVec{{b.empty() ? 0 : b.front(), 1}});
            const CoeffVec stored = w.value(s);
            auto perm = s;
            do {
                ++rep.sign_checks;
                auto sorted = perm;
                const int sg = sort_sign(sorted);
                CoeffVec expect;
                add_into(expect, stored, sg);
                if (w.value(perm) != expect) ++rep.sign_failures;
            } while (std::next_permutation(perm.begin(), perm.end()));
            // Face inclusions of coefficient spaces.
            for (std::size_t i = 0; d >= 1 && i < s.size(); ++i) {
                auto face = s;
                face.erase(face.begin() + static_cast<long>(i));
                ++rep.inclusion_checks;
                const auto fb = C.basis(face);
                if (!std::includes(fb.begin(), fb.end(), b.begin(), b.end())) ++rep.inclusion_failures;
            }
        }

    std::vector<std::vector<int>> all;
    for (const auto& level : X.simplices())
        for (const auto& s : level) all.push_back(s);
    std::vector<std::vector<int>> inv;
    inv.reserve(all.size());
    for (const auto& s : all) inv.push_back(X.stabilized_vertices(s));
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = 0; b < all.size(); ++b) {
            ++rep.reversal_pairs;
            const bool face = std::includes(all[b].begin(), all[b].end(), all[a].begin(), all[a].end());
            const bool rev = std::includes(inv[b].begin(), inv[b].end(), all[a].begin(), all[a].end());
            if (face != rev) ++rep.reversal_failures;
        }
    return rep;
}

}  // namespace parahoric
