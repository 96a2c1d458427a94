#pragma once

// Depth-zero coefficient systems on the faces of the standard chamber and
// the per-orbit Hom dimension identity: a direct count over
// J_max ∩ U(A)^x against the sum of lemma values over the tau_i.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/intersection.hpp"
#include "parahoric/sweep.hpp"

namespace parahoric {

/// x^{-1} h x on the diagonal blocks of the shape, computed by explicit
/// products with the monomial matrices pi^S x^{-1} and pi^T x at a raised
/// level and read at index S + T. Independent of the model's read table.
inline std::vector<MatCode> conjugated_levi_blocks(const IntersectionModel& m, const DigitMatrix& D) {
    const auto& x = m.x();
    const int R = m.R();
    const auto s = x.perm();
    const auto a = x.exponents();
    const int S = *std::max_element(a.begin(), a.end());
    const int T = -*std::min_element(a.begin(), a.end());
    const int level = m.level() + S + T + 1;
    TruncMatrix xi(m.field(), R, level), xm(m.field(), R, level), h(m.field(), R, level);
    for (int j = 0; j < R; ++j) {
        xm.at(s[j], j) = TruncRingElem::monomial(m.field(), level, T + a[j]);
        xi.at(j, s[j]) = TruncRingElem::monomial(m.field(), level, S - a[j]);
    }
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) {
            const int c = m.read_index(i, j);
            if (c >= 0) h.at(i, j) = TruncRingElem::monomial(m.field(), level, c, D[i * R + j]);
        }
    const auto y = xi * h * xm;
    const auto& F = *m.field();
    std::vector<MatCode> out;
    const auto starts = m.shape_b().starts();
    for (int b = 0; b < m.shape_b().e(); ++b) {
        const int n = m.shape_b().parts()[b];
        MatCode c = 0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const auto& e = y.at(starts[b] + k, starts[b] + l);
                for (int t = 0; t < S + T; ++t)
                    if (e[t] != 0) throw InvariantError("conjugate is not integral");
                Fq v = e[S + T];
                if (v != 0) v = F.mul(F.mul(v, F.inv(m.scaling()[starts[b] + k])), m.scaling()[starts[b] + l]);
                c = MatOps::set(c, k * n + l, v);
            }
        out.push_back(c);
    }
    return out;
}

/// Pattern of the stabilizer of the standard chamber face spanned by the
/// vertices span(e_1..e_m) + pi L_0, m in `face`; m = R is L_0 itself.
inline OrderPattern chamber_face_pattern(int R, const std::vector<int>& face) {
    if (face.empty()) throw ArgumentError("a face needs at least one vertex");
    OrderPattern P(R);
    for (int k = 0; k < R; ++k)
        for (int l = 0; l < R; ++l) {
            int v = -R;
            for (int m : face) {
                if (m < 1 || m > R) throw ArgumentError("chamber vertex index out of range");
                v = std::max(v, (k < m ? 0 : 1) - (l < m ? 0 : 1));
            }
            P.at(k, l) = v;
        }
    return P;
}

/// Nonempty subsets of the chamber vertices {f, 2f, ..., R}, each sorted,
/// ordered by size then lexicographically.
inline std::vector<std::vector<int>> chamber_faces(int f, int e0) {
    std::vector<std::vector<int>> out;
    for (int mask = 1; mask < (1 << e0); ++mask) {
        std::vector<int> face;
        for (int i = 0; i < e0; ++i)
            if (mask & (1 << i)) face.push_back((i + 1) * f);
        out.push_back(face);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

/// A standard shape and y in W~(B_0) with y std(shape) y^{-1} equal to the
/// face's order; y = 1 is preferred when the face contains L_0.
struct FaceOrder {
    BlockShape shape;
    AffineWeylElem y;
};

inline FaceOrder face_order(int f, int e0, const std::vector<int>& face) {
    const auto P = chamber_face_pattern(f * e0, face);
    auto ys = weyl_representatives(e0, f, 1);
    std::stable_partition(ys.begin(), ys.end(), [](const AffineWeylElem& y) { return y.is_identity(); });
    for (const auto& y : ys)
        for (const auto& shape : intermediate_shapes(f, e0))
            if (conjugate_pattern(standard_order(shape), y) == P) return {shape, y};
    throw InvariantError("no standard representative for the chamber face");
}

/// Depth-zero coefficient data on a face: rho = rho_0^{⊗e0} and irreducibles
/// tau_i of the face's Levi with cuspidal support rho. Here the order in the
/// centralizer equals the face's order, so each lambda_i is induced from the
/// whole of U(A) and has the dimension of tau_i.
struct DepthZeroCoefficientSpec {
    FieldPtr field;
    int f = 1, e0 = 1;
    int rho_index = 0;
    std::vector<int> face;
    BlockShape shape;
    std::vector<std::vector<int>> taus;

    DepthZeroCoefficientSpec(FieldPtr field_, int f_, int e0_, int rho_index_, std::vector<int> face_,
                             std::vector<std::vector<int>> taus_)
        : field(std::move(field_)), f(f_), e0(e0_), rho_index(rho_index_), face(std::move(face_)), taus(std::move(taus_)) {
        shape = face_order(f, e0, face).shape;
        const auto r = rho();
        for (const auto& t : taus)
            if (!cuspidal_support_matches(tau(t), r)) throw ArgumentError("tau does not have cuspidal support rho");
    }

    LeviCharacter rho() const { return tensor_power(cuspidal_rho0(f, field, rho_index), e0); }
    LeviCharacter tau(const std::vector<int>& index) const { return levi_irreducible(shape, field, index); }
    static constexpr std::int64_t induction_index() { return 1; }
    std::int64_t module_dimension() const {
        std::int64_t d = 0;
        for (const auto& t : taus) d += induction_index() * tau(t).degree();
        return d;
    }
};

/// Every irreducible of the face's Levi with cuspidal support rho.
inline std::vector<std::vector<int>> support_taus(const FieldPtr& field, int f, int e0, int rho_index,
                                                  const std::vector<int>& face) {
    const auto shape = face_order(f, e0, face).shape;
    const auto rho = tensor_power(cuspidal_rho0(f, field, rho_index), e0);
    std::vector<std::vector<int>> out;
    for (const auto& [idx, tau] : levi_irreducibles(shape.parts(), field))
        if (cuspidal_support_matches(tau, rho)) out.push_back(idx);
    return out;
}

struct OrbitReport {
    int q = 0, f = 0, e0 = 0, rho_index = 0;
    std::vector<int> face;
    BlockShape shape;
    AffineWeylElem y, x, xy;
    std::vector<std::vector<int>> taus;
    std::int64_t module_dimension = 0;
    std::int64_t direct = 0;     // (a)
    std::int64_t predicted = 0;  // (b)
    std::int64_t at_identity = 0;
    bool equal = false;
    std::string error;
};

inline constexpr long kDefaultOrbitBound = 2'000'000;

/// (a) dim Hom over J_max ∩ U(A)^x of lambda_max against the x-translate of
/// the face module, by full enumeration with explicit conjugation; (b) the
/// sum over i of the lemma's left side; and the same sum for x = 1.
inline OrbitReport orbit_dimension_check(const DepthZeroCoefficientSpec& spec, const AffineWeylElem& x,
                                         long bound = kDefaultOrbitBound) {
    if (x.f != spec.f || x.e0() != spec.e0) throw ShapeError("Weyl element does not match the coefficient data");
    OrbitReport rep;
    rep.q = spec.field->q();
    rep.f = spec.f;
    rep.e0 = spec.e0;
    rep.rho_index = spec.rho_index;
    rep.face = spec.face;
    rep.taus = spec.taus;
    rep.x = x;
    rep.module_dimension = spec.module_dimension();
    const auto fo = face_order(spec.f, spec.e0, spec.face);
    rep.shape = fo.shape;
    rep.y = fo.y;
    rep.xy = x * fo.y;

    const auto b0 = BlockShape::uniform(spec.f, spec.e0);
    const auto m = build_intersection(b0, fo.shape, rep.xy, spec.field, bound);
    const auto translated = conjugate_pattern(chamber_face_pattern(spec.f * spec.e0, spec.face), x);
    if (m.pattern() != intersect_patterns(standard_order(b0), translated))
        throw InvariantError("translated face order does not match the intersection pattern");

    const auto rho = spec.rho();
    std::vector<LeviCharacter> taus;
    for (const auto& t : spec.taus) taus.push_back(spec.tau(t));

    // (a): one coset, so the induced character at h is tau_i(x^{-1} h x).
    const auto glf = TableCache::instance().table(spec.f, spec.field)->group;
    std::vector<GroupPtr> levi_groups;
    for (int n : fo.shape.parts()) levi_groups.push_back(TableCache::instance().table(n, spec.field)->group);
    CycValue sum;
    std::int64_t order = 0;
    m.for_each_element(*glf, [&](const DigitMatrix& D) {
        std::vector<int> c0, cb;
        for (MatCode g : m.pr0(D)) c0.push_back(glf->class_of(g));
        const auto blocks = conjugated_levi_blocks(m, D);
        for (std::size_t i = 0; i < blocks.size(); ++i) cb.push_back(levi_groups[i]->class_of(blocks[i]));
        CycValue lam;
        for (const auto& t : taus) lam += t.value(cb);
        sum += rho.value(c0) * lam.conj();
        ++order;
    });
    const CycValue d = sum.divide_exact(order);
    if (!d.is_rational() || d.rational_value() < 0) throw InvariantError("direct Hom dimension is not a non-negative integer");
    rep.direct = d.rational_value();

    // (b) and the x = 1 value from orbit-reduced histograms.
    const auto hx = reduced_histogram(m);
    const auto h1 = reduced_histogram(build_intersection(b0, fo.shape, AffineWeylElem::identity(spec.f, spec.e0), spec.field, bound));
    for (const auto& t : taus) {
        rep.predicted += hom_dim(rho, t, hx);
        rep.at_identity += hom_dim(rho, t, h1);
    }
    rep.equal = rep.direct == rep.predicted;
    return rep;
}

struct OrbitGrid {
    std::vector<int> qs;
    std::vector<int> e0s;
    int f = 1;
    int bound = 1;
    int threads = 0;
};

/// Every (q, e0, rho_0, face, x) cell with x ranging over W~(B_0) of spread
/// at most `bound` and tau_i over all irreducibles with cuspidal support rho.
inline std::vector<OrbitReport> orbit_sweep(const OrbitGrid& grid) {
    struct Job {
        FieldPtr field;
        int e0, rho_index;
        std::vector<int> face;
        AffineWeylElem x;
    };
    std::vector<Job> jobs;
    for (int q : grid.qs) {
        const auto field = field_of_order(q);
        for (int e0 : grid.e0s) {
            const auto glf = TableCache::instance().table(grid.f, field);
            for (int ri : cuspidal_indices(*glf))
                for (const auto& face : chamber_faces(grid.f, e0))
                    for (const auto& x : weyl_representatives(e0, grid.f, grid.bound))
                        if (exponent_spread(x) <= grid.bound) jobs.push_back({field, e0, ri, face, x});
        }
    }
    std::vector<OrbitReport> out(jobs.size());
    parallel_for(jobs.size(), grid.threads, [&](std::size_t i) {
        const auto& j = jobs[i];
        try {
            const DepthZeroCoefficientSpec spec(j.field, grid.f, j.e0, j.rho_index, j.face,
                                                support_taus(j.field, grid.f, j.e0, j.rho_index, j.face));
            out[i] = orbit_dimension_check(spec, j.x);
        } catch (const std::exception& e) {
            OrbitReport r;
            r.q = j.field->q();
            r.f = grid.f;
            r.e0 = j.e0;
            r.rho_index = j.rho_index;
            r.face = j.face;
            r.x = j.x;
            r.error = e.what();
            out[i] = r;
        }
    });
    return out;
}

}  // namespace parahoric
