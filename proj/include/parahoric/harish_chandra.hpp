#pragma once

// Parabolic machinery for GL_n(F_q) and its standard Levi subgroups:
// cuspidality, parabolic induction, cuspidal support and Hom dimensions of
// characters pulled back along projections.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parahoric/character_table.hpp"
#include "parahoric/combinatorics.hpp"
#include "parahoric/cyclotomic.hpp"
#include "parahoric/errors.hpp"
#include "parahoric/glq_group.hpp"

namespace parahoric {

/// Diagonal block of g (an n x n code) starting at `start` of size `size`.
inline MatCode extract_block(const MatOps& big, MatCode g, int start, int size) {
    MatCode r = 0;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) r = MatOps::set(r, i * size + j, big.at(g, start + i, start + j));
    return r;
}

/// Unipotent radical of the standard (upper block triangular) parabolic of
/// GL_n(F_q) with the given composition.
inline std::vector<MatCode> unipotent_radical(const MatOps& ops, const std::vector<int>& comp) {
    const int n = ops.n();
    const int q = ops.field().q();
    const auto blk = block_of(comp);
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (blk[i] < blk[j]) free.push_back(i * n + j);
    std::vector<MatCode> out;
    std::vector<Fq> digits(free.size(), 0);
    while (true) {
        MatCode c = ops.identity();
        for (std::size_t t = 0; t < free.size(); ++t) c = MatOps::set(c, free[t], digits[t]);
        out.push_back(c);
        std::size_t pos = 0;
        while (pos < free.size() && ++digits[pos] == q) digits[pos++] = 0;
        if (pos == free.size()) break;
    }
    return out;
}

/// Elements of the standard parabolic with the given composition.
inline std::vector<MatCode> parabolic_elements(const FiniteGroupTable& G, const std::vector<int>& comp) {
    const int n = G.n();
    const auto blk = block_of(comp);
    std::vector<MatCode> out;
    for (MatCode g : G.elements()) {
        bool in = true;
        for (int i = 0; i < n && in; ++i)
            for (int j = 0; j < n && in; ++j)
                if (blk[i] > blk[j] && G.ops().at(g, i, j) != 0) in = false;
        if (in) out.push_back(g);
    }
    return out;
}

inline bool is_irreducible(const ClassFunction& chi) { return inner_product(chi, chi) == CycValue(1); }

/// True iff sum_{u in U} chi(u) = 0 for the unipotent radical U of every
/// standard proper parabolic subgroup.
inline bool is_cuspidal(const ClassFunction& chi) {
    const FiniteGroupTable& G = *chi.group;
    const int n = G.n();
    for (const auto& comp : compositions(n)) {
        if (comp.size() < 2) continue;
        CycValue s;
        for (MatCode u : unipotent_radical(G.ops(), comp)) s += chi[G.class_of(u)];
        if (!s.is_zero()) return false;
    }
    return true;
}

/// Indices of the cuspidal irreducibles in a table.
inline std::vector<int> cuspidal_indices(const CharacterTable& T) {
    std::vector<int> out;
    for (int i = 0; i < T.size(); ++i)
        if (is_cuspidal(T[i])) out.push_back(i);
    return out;
}

/// Character of a block-diagonal group prod GL_{n_i}(F_q): one irreducible
/// (or class function) per factor; values multiply across factors.
struct LeviCharacter {
    std::vector<int> shape;
    std::vector<ClassFunction> factors;

    CycValue value(const std::vector<int>& classes) const {
        CycValue v(1);
        for (std::size_t i = 0; i < factors.size(); ++i) v *= factors[i][classes[i]];
        return v;
    }
    std::int64_t degree() const {
        std::int64_t d = 1;
        for (const auto& f : factors) d *= f.degree();
        return d;
    }
};

/// rho_0 tensored e times, on GL_f(F_q)^e.
inline LeviCharacter tensor_power(const ClassFunction& rho0, int e) {
    LeviCharacter L;
    L.shape.assign(e, rho0.group->n());
    L.factors.assign(e, rho0);
    return L;
}

/// Class tuple of the Levi component of g with respect to a composition,
/// looked up in the given factor groups.
inline std::vector<int> levi_classes(const MatOps& ops, MatCode g, const std::vector<int>& comp,
                                     const std::vector<GroupPtr>& groups) {
    std::vector<int> out;
    const auto starts = block_starts(comp);
    for (std::size_t b = 0; b < comp.size(); ++b) out.push_back(groups[b]->class_of(extract_block(ops, g, starts[b], comp[b])));
    return out;
}

/// Ind_P^G of the inflation of a Levi character, P the standard parabolic
/// with Levi block sizes `levi.shape`; computed from left coset
/// representatives of G/P by Ind(g) = sum_r chi~(r^{-1} g r).
inline ClassFunction parabolic_induction(const GroupPtr& Gp, const LeviCharacter& levi) {
    const FiniteGroupTable& G = *Gp;
    const auto& ops = G.ops();
    const auto& comp = levi.shape;
    const auto blk = block_of(comp);
    std::vector<GroupPtr> groups;
    for (const auto& f : levi.factors) groups.push_back(f.group);
    const auto P = parabolic_elements(G, comp);

    std::vector<bool> seen(G.order(), false);
    std::vector<MatCode> reps;
    for (int x = 0; x < G.order(); ++x) {
        if (seen[x]) continue;
        reps.push_back(G.elements()[x]);
        for (MatCode p : P) seen[G.index_of(ops.mul(G.elements()[x], p))] = true;
    }
    if (static_cast<long>(reps.size() * P.size()) != G.order()) throw InvariantError("coset enumeration failed");
    std::vector<MatCode> reps_inv;
    for (MatCode r : reps) reps_inv.push_back(ops.inverse(r));

    auto in_parabolic = [&](MatCode y) {
        for (int i = 0; i < G.n(); ++i)
            for (int j = 0; j < G.n(); ++j)
                if (blk[i] > blk[j] && ops.at(y, i, j) != 0) return false;
        return true;
    };
    ClassFunction out{Gp, {}};
    for (int c = 0; c < G.num_classes(); ++c) {
        const MatCode g = G.class_rep(c);
        CycValue s;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            const MatCode y = ops.mul(ops.mul(reps_inv[r], g), reps[r]);
            if (in_parabolic(y)) s += levi.value(levi_classes(ops, y, comp, groups));
        }
        out.values.push_back(s);
    }
    return out;
}

/// <Ind_P^G infl(levi), tau> via the induced character.
inline std::int64_t induction_multiplicity(const ClassFunction& tau, const LeviCharacter& levi) {
    if (levi.shape.size() == 1) return inner_product(levi.factors[0], tau).rational_value();
    return inner_product(parabolic_induction(tau.group, levi), tau).rational_value();
}

/// <infl(levi), Res_P tau>_P by Frobenius reciprocity; an independent route
/// to induction_multiplicity.
inline std::int64_t frobenius_multiplicity(const ClassFunction& tau, const LeviCharacter& levi) {
    const FiniteGroupTable& G = *tau.group;
    std::vector<GroupPtr> groups;
    for (const auto& f : levi.factors) groups.push_back(f.group);
    const auto P = parabolic_elements(G, levi.shape);
    CycValue s;
    for (MatCode p : P) s += levi.value(levi_classes(G.ops(), p, levi.shape, groups)) * tau[G.class_of(p)].conj();
    return s.divide_exact(static_cast<std::int64_t>(P.size())).rational_value();
}

/// Splits the Levi character rho on GL_f^{e0} into the groups of factors
/// lying in each block of the coarser composition `shape`.
inline std::vector<LeviCharacter> split_levi(const LeviCharacter& rho, const std::vector<int>& shape) {
    std::vector<LeviCharacter> parts;
    std::size_t idx = 0;
    for (int ni : shape) {
        LeviCharacter part;
        int acc = 0;
        while (acc < ni) {
            if (idx >= rho.shape.size()) throw ShapeError("Levi shape does not refine the block shape");
            acc += rho.shape[idx];
            part.shape.push_back(rho.shape[idx]);
            part.factors.push_back(rho.factors[idx]);
            ++idx;
        }
        if (acc != ni) throw ShapeError("Levi shape does not refine the block shape");
        parts.push_back(std::move(part));
    }
    if (idx != rho.shape.size()) throw ShapeError("Levi shape does not refine the block shape");
    return parts;
}

/// <Ind_P^{L_B} infl(rho), tau> for tau irreducible on L_B = prod GL_{n_i},
/// computed factor by factor.
inline std::int64_t support_multiplicity(const LeviCharacter& tau, const LeviCharacter& rho) {
    const auto parts = split_levi(rho, tau.shape);
    std::int64_t mult = 1;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (tau.factors[i].group->n() != tau.shape[i]) throw ShapeError("factor size mismatch");
        mult *= induction_multiplicity(tau.factors[i], parts[i]);
        if (mult == 0) break;
    }
    return mult;
}

/// True iff tau occurs in the parabolic induction of rho.
inline bool cuspidal_support_matches(const LeviCharacter& tau, const LeviCharacter& rho) {
    return support_multiplicity(tau, rho) > 0;
}

/// Class-tuple histogram of a finite group H under two projections.
struct ProjectionHistogram {
    std::int64_t order = 0;
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t> counts;

    void add(const std::vector<int>& c1, const std::vector<int>& c2, std::int64_t n = 1) {
        counts[{c1, c2}] += n;
        order += n;
    }
};

/// (1/|H|) sum_h chi(pr1 h) conj(psi(pr2 h)); must be a non-negative rational integer.
inline std::int64_t hom_dim(const LeviCharacter& chi, const LeviCharacter& psi, const ProjectionHistogram& H) {
    if (H.order <= 0) throw InvariantError("empty group");
    CycValue s;
    for (const auto& [key, count] : H.counts) s += CycValue(count) * chi.value(key.first) * psi.value(key.second).conj();
    CycValue d;
    try {
        d = s.divide_exact(H.order);
    } catch (const InvariantError&) {
        throw InvariantError("Hom dimension is not an integer: " + s.to_string() + " / " + std::to_string(H.order));
    }
    if (!d.is_rational() || d.rational_value() < 0)
        throw InvariantError("Hom dimension is not a non-negative integer: " + d.to_string());
    return d.rational_value();
}

/// All irreducibles of prod GL_{n_i}(F_q), as tuples of factor characters,
/// in lexicographic order of factor indices.
inline std::vector<std::pair<std::vector<int>, LeviCharacter>> levi_irreducibles(const std::vector<int>& shape,
                                                                              const FieldPtr& field) {
    std::vector<std::shared_ptr<const CharacterTable>> tables;
    for (int ni : shape) tables.push_back(TableCache::instance().table(ni, field));
    std::vector<std::pair<std::vector<int>, LeviCharacter>> out;
    std::vector<int> idx(shape.size(), 0);
    while (true) {
        LeviCharacter L;
        L.shape = shape;
        for (std::size_t i = 0; i < shape.size(); ++i) L.factors.push_back((*tables[i])[idx[i]]);
        out.emplace_back(idx, std::move(L));
        int pos = static_cast<int>(shape.size()) - 1;
        while (pos >= 0 && ++idx[pos] == tables[pos]->size()) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

}  // namespace parahoric
