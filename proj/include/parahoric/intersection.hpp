#pragma once

// Finite models of H(x) = U(B_0) ∩ x U(B) x^{-1} modulo the joint kernel of
// its two Levi projections, and the Hom-dimension identity built on them.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "parahoric/character_table.hpp"
#include "parahoric/errors.hpp"
#include "parahoric/field.hpp"
#include "parahoric/glq_group.hpp"
#include "parahoric/harish_chandra.hpp"
#include "parahoric/orders.hpp"

namespace parahoric {

inline constexpr long kDefaultQuotientBound = 10'000'000;

/// Element of H(x)/K: an R x R digit matrix holding, at each read
/// position, the coefficient of pi^{read index}; zero elsewhere.
using DigitMatrix = std::vector<Fq>;

/// One entry of a prB block: local (k, l) in the block, read from position
/// (row, col) of H; inactive entries are identically zero on H.
struct BlockRead {
    int k = 0, l = 0;
    int row = 0, col = 0;
    bool active = false;
};

class IntersectionModel {
public:
    IntersectionModel(FieldPtr field, BlockShape shape_b, AffineWeylElem x, std::vector<Fq> scaling = {})
        : field_(std::move(field)), shape_b_(std::move(shape_b)), x_(std::move(x)), scaling_(std::move(scaling)) {
        const int R = x_.R();
        const int f = x_.f;
        if (shape_b_.R() != R) throw ShapeError("shape and Weyl element sizes differ");
        shape_b_.in_units_of(f);
        if (scaling_.empty()) scaling_.assign(R, 1);
        if (static_cast<int>(scaling_.size()) != R) throw ShapeError("unit scaling has the wrong length");
        for (Fq t : scaling_)
            if (t == 0 || t >= field_->q()) throw ArgumentError("unit scalings must be nonzero field elements");

        pattern_ = intersect_patterns(standard_order(BlockShape::uniform(f, x_.e0())),
                                      conjugate_pattern(standard_order(shape_b_), x_));
        read_.assign(static_cast<std::size_t>(R) * R, -1);
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < R; ++j)
                if (i / f == j / f) read_[i * R + j] = 0;

        const auto s = x_.perm();
        const auto a = x_.exponents();
        const auto starts = shape_b_.starts();
        int max_index = 0;
        for (int blk = 0; blk < shape_b_.e(); ++blk) {
            std::vector<BlockRead> reads;
            const int n = shape_b_.parts()[blk];
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const int gk = starts[blk] + k, gl = starts[blk] + l;
                    BlockRead r{k, l, s[gk], s[gl], false};
                    const int c = a[gk] - a[gl];
                    if (pattern_.at(r.row, r.col) == c) {
                        r.active = true;
                        int& slot = read_[r.row * R + r.col];
                        if (slot >= 0 && slot != c) throw InvariantError("conflicting read indices");
                        if (slot < 0) free_.emplace_back(r.row, r.col);
                        slot = c;
                        max_index = std::max(max_index, c);
                    }
                    reads.push_back(r);
                }
            block_reads_.push_back(std::move(reads));
        }
        std::sort(free_.begin(), free_.end());
        level_ = max_index + 1;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < R; ++j)
                if (read_[i * R + j] >= 0) level_ = std::max(level_, read_[i * R + j] + 1);
        level_ = std::max(level_, exponent_spread(x_) + 2);
    }

    const FieldPtr& field() const { return field_; }
    int f() const { return x_.f; }
    int e0() const { return x_.e0(); }
    int R() const { return x_.R(); }
    const BlockShape& shape_b() const { return shape_b_; }
    const AffineWeylElem& x() const { return x_; }
    const OrderPattern& pattern() const { return pattern_; }
    int level() const { return level_; }
    const std::vector<Fq>& scaling() const { return scaling_; }
    /// Coefficient index read at (i, j), or -1.
    int read_index(int i, int j) const { return read_[i * R() + j]; }
    /// Positions read by prB only (outside the diagonal f-blocks), sorted.
    const std::vector<std::pair<int, int>>& free_positions() const { return free_; }
    const std::vector<std::vector<BlockRead>>& block_reads() const { return block_reads_; }

    /// |GL_f(F_q)|^{e0} q^{#free}.
    long predicted_order() const {
        long n = 1;
        const long g = gl_order(f(), field_->q());
        for (int i = 0; i < e0(); ++i) n *= g;
        for (std::size_t i = 0; i < free_.size(); ++i) n *= field_->q();
        return n;
    }

    /// Residue blocks on the diagonal f-blocks.
    std::vector<MatCode> pr0(const DigitMatrix& D) const {
        const int R_ = R(), f_ = f();
        std::vector<MatCode> out;
        for (int b = 0; b < e0(); ++b) {
            MatCode c = 0;
            for (int i = 0; i < f_; ++i)
                for (int j = 0; j < f_; ++j) c = MatOps::set(c, i * f_ + j, D[(b * f_ + i) * R_ + b * f_ + j]);
            out.push_back(c);
        }
        return out;
    }

    /// Diagonal n-blocks of x^{-1} h x reduced, with entry (k, l) scaled by
    /// t_k^{-1} t_l.
    std::vector<MatCode> prB(const DigitMatrix& D) const {
        const auto& F = *field_;
        const auto starts = shape_b_.starts();
        std::vector<MatCode> out;
        for (std::size_t blk = 0; blk < block_reads_.size(); ++blk) {
            const int n = shape_b_.parts()[blk];
            MatCode c = 0;
            for (const auto& r : block_reads_[blk]) {
                if (!r.active) continue;
                Fq v = D[r.row * R() + r.col];
                if (v == 0) continue;
                v = F.mul(F.mul(v, F.inv(scaling_[starts[blk] + r.k])), scaling_[starts[blk] + r.l]);
                c = MatOps::set(c, r.k * n + r.l, v);
            }
            out.push_back(c);
        }
        return out;
    }

    /// The element of H with entries D(i,j) pi^{read index} at read positions.
    TruncMatrix lift(const DigitMatrix& D) const {
        TruncMatrix m(field_, R(), level_);
        for (int i = 0; i < R(); ++i)
            for (int j = 0; j < R(); ++j) {
                const int c = read_index(i, j);
                if (c >= 0 && D[i * R() + j] != 0) m.at(i, j) = TruncRingElem::monomial(field_, level_, c, D[i * R() + j]);
            }
        return m;
    }

    /// Reads the coefficients at the read positions of an element of H.
    DigitMatrix project(const TruncMatrix& h) const {
        DigitMatrix D(static_cast<std::size_t>(R()) * R(), 0);
        for (int i = 0; i < R(); ++i)
            for (int j = 0; j < R(); ++j) {
                const int c = read_index(i, j);
                if (c >= 0) D[i * R() + j] = h.at(i, j)[c];
            }
        return D;
    }

    /// Whether a truncated matrix lies in the pattern of H.
    bool in_pattern(const TruncMatrix& h) const {
        for (int i = 0; i < R(); ++i)
            for (int j = 0; j < R(); ++j) {
                const auto& e = h.at(i, j);
                for (int c = 0; c < std::min(pattern_.at(i, j), level_); ++c)
                    if (e[c] != 0) return false;
            }
        return true;
    }

    /// Group law of H/K computed through lifts.
    DigitMatrix multiply(const DigitMatrix& A, const DigitMatrix& B) const { return project(lift(A) * lift(B)); }

    /// Digit matrix with the given pr0 blocks and free digits.
    DigitMatrix assemble(const std::vector<MatCode>& blocks, const std::vector<Fq>& free_digits) const {
        const int R_ = R(), f_ = f();
        DigitMatrix D(static_cast<std::size_t>(R_) * R_, 0);
        for (int b = 0; b < e0(); ++b)
            for (int i = 0; i < f_; ++i)
                for (int j = 0; j < f_; ++j) D[(b * f_ + i) * R_ + b * f_ + j] = MatOps::get(blocks[b], i * f_ + j);
        for (std::size_t t = 0; t < free_.size(); ++t) D[free_[t].first * R_ + free_[t].second] = free_digits[t];
        return D;
    }

    /// Calls fn on every free-digit vector.
    void for_each_free(const std::function<void(const std::vector<Fq>&)>& fn) const {
        const int q = field_->q();
        std::vector<Fq> d(free_.size(), 0);
        while (true) {
            fn(d);
            std::size_t pos = 0;
            while (pos < d.size() && ++d[pos] == q) d[pos++] = 0;
            if (pos == d.size()) break;
        }
    }

    /// Enumerates H/K as the product of GL_f(F_q)^{e0} with the free digits.
    void for_each_element(const FiniteGroupTable& glf, const std::function<void(const DigitMatrix&)>& fn) const {
        if (glf.n() != f()) throw ShapeError("GL_f table has the wrong size");
        std::vector<int> idx(e0(), 0);
        std::vector<MatCode> blocks(e0());
        while (true) {
            for (int b = 0; b < e0(); ++b) blocks[b] = glf.elements()[idx[b]];
            for_each_free([&](const std::vector<Fq>& d) { fn(assemble(blocks, d)); });
            int pos = e0() - 1;
            while (pos >= 0 && ++idx[pos] == glf.order()) idx[pos--] = 0;
            if (pos < 0) break;
        }
    }

private:
    FieldPtr field_;
    BlockShape shape_b_;
    AffineWeylElem x_;
    std::vector<Fq> scaling_;
    OrderPattern pattern_;
    int level_ = 1;
    std::vector<int> read_;
    std::vector<std::pair<int, int>> free_;
    std::vector<std::vector<BlockRead>> block_reads_;
};

/// Builds the model with shape_b0 = (f, ..., f); checks the size bound.
inline IntersectionModel build_intersection(const BlockShape& shape_b0, const BlockShape& shape_b, const AffineWeylElem& x,
                                            const FieldPtr& field, long bound = kDefaultQuotientBound,
                                            std::vector<Fq> scaling = {}) {
    if (shape_b0 != BlockShape::uniform(x.f, x.e0())) throw ShapeError("B_0 must have shape (f, ..., f) matching x");
    IntersectionModel m(field, shape_b, x, std::move(scaling));
    if (m.predicted_order() > bound)
        throw SizeLimitError("|H/K| = " + std::to_string(m.predicted_order()) + " exceeds bound " + std::to_string(bound));
    return m;
}

/// Class keys for the factors of a Levi subgroup: table class indices where
/// the factor group is within the size bound, similarity invariants otherwise.
class LeviClassKeyer {
public:
    LeviClassKeyer(const std::vector<int>& shape, const FieldPtr& field) {
        for (int n : shape) {
            if (gl_order(n, field->q()) <= group_bound()) {
                tables_.push_back(TableCache::instance().table(n, field)->group);
                keyers_.emplace_back(std::nullopt);
            } else {
                tables_.push_back(nullptr);
                keyers_.emplace_back(SimilarityKeyer(MatOps(field, n)));
                tabulated_ = false;
            }
        }
    }
    /// True when every factor is keyed by a character-table class index.
    bool tabulated() const { return tabulated_; }

    std::vector<int> key(const std::vector<MatCode>& blocks) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (tables_[i]) {
                out.push_back(tables_[i]->class_of(blocks[i]));
            } else {
                const auto k = keyers_[i]->key(blocks[i]);
                out.push_back(static_cast<int>(k.size()));
                out.insert(out.end(), k.begin(), k.end());
            }
        }
        return out;
    }

private:
    std::vector<GroupPtr> tables_;
    std::vector<std::optional<SimilarityKeyer>> keyers_;
    bool tabulated_ = true;
};

/// Histogram of (pr0 classes, prB keys) over H/K by full enumeration.
inline ProjectionHistogram full_histogram(const IntersectionModel& m) {
    const auto glf = TableCache::instance().table(m.f(), m.field())->group;
    LeviClassKeyer keyer(m.shape_b().parts(), m.field());
    ProjectionHistogram H;
    m.for_each_element(*glf, [&](const DigitMatrix& D) {
        std::vector<int> c0;
        for (MatCode g : m.pr0(D)) c0.push_back(glf->class_of(g));
        H.add(c0, keyer.key(m.prB(D)));
    });
    return H;
}

/// The same histogram using the block-diagonal copy of GL_f(F_q)^{e0} in H:
/// conjugation by it preserves both class keys and permutes each fiber of
/// pr0, so one class representative per factor suffices, weighted by class
/// sizes.
inline ProjectionHistogram reduced_histogram(const IntersectionModel& m) {
    const auto glf = TableCache::instance().table(m.f(), m.field())->group;
    LeviClassKeyer keyer(m.shape_b().parts(), m.field());
    ProjectionHistogram H;
    const int k = glf->num_classes();
    std::vector<int> idx(m.e0(), 0);
    std::vector<MatCode> blocks(m.e0());
    while (true) {
        std::int64_t weight = 1;
        for (int b = 0; b < m.e0(); ++b) {
            blocks[b] = glf->class_rep(idx[b]);
            weight *= glf->classes()[idx[b]].size;
        }
        m.for_each_free([&](const std::vector<Fq>& d) { H.add(idx, keyer.key(m.prB(m.assemble(blocks, d))), weight); });
        int pos = m.e0() - 1;
        while (pos >= 0 && ++idx[pos] == k) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return H;
}

/// Per prB-key sums (1/|H|) sum_{prB h in C} rho(pr0 h); characters of L_B
/// pair with it to give the Hom dimensions, so two such functions agree iff
/// the Hom dimensions agree for every irreducible tau.
inline std::map<std::vector<int>, CycValue> pushforward(const LeviCharacter& rho, const ProjectionHistogram& H) {
    std::map<std::vector<int>, CycValue> raw;
    for (const auto& [key, count] : H.counts) raw[key.second] += CycValue(count) * rho.value(key.first);
    std::map<std::vector<int>, CycValue> out;
    for (auto& [k, v] : raw)
        if (!v.is_zero()) out.emplace(k, v);
    return out;
}

/// True iff the two pushforwards agree after normalizing by |H|.
inline bool same_pushforward(const LeviCharacter& rho, const ProjectionHistogram& A, const ProjectionHistogram& B) {
    auto pa = pushforward(rho, A);
    auto pb = pushforward(rho, B);
    if (pa.size() != pb.size()) return false;
    for (auto& [k, v] : pa) {
        auto it = pb.find(k);
        if (it == pb.end()) return false;
        if (v * CycValue(B.order) != it->second * CycValue(A.order)) return false;
    }
    return true;
}

/// sum_tau deg(tau) dim Hom_H(rho, tau^x) = (|L_B| / |H|) sum_{prB h = 1} rho(pr0 h).
inline std::int64_t regular_hom_dim(const LeviCharacter& rho, const ProjectionHistogram& H, const std::vector<int>& identity_key,
                                    std::int64_t levi_order) {
    CycValue s;
    for (const auto& [key, count] : H.counts)
        if (key.second == identity_key) s += CycValue(count) * rho.value(key.first);
    const CycValue d = (s * CycValue(levi_order)).divide_exact(H.order);
    if (!d.is_rational() || d.rational_value() < 0) throw InvariantError("regular Hom dimension is not a non-negative integer");
    return d.rational_value();
}

inline std::vector<int> identity_key(const IntersectionModel& m) {
    LeviClassKeyer keyer(m.shape_b().parts(), m.field());
    std::vector<MatCode> ids;
    for (int n : m.shape_b().parts()) ids.push_back(MatOps(m.field(), n).identity());
    return keyer.key(ids);
}

struct LemmaReport {
    int q = 0, f = 0, e0 = 0;
    BlockShape shape;
    int rho_index = 0;
    std::vector<int> tau_index;  // factor indices; empty for a class-function cell
    AffineWeylElem x;
    std::int64_t left = 0;
    std::int64_t right = 0;
    bool equal = false;
    std::string mode = "character";  // or "class-function"
    std::string error;
};

/// rho_0 must be a cuspidal irreducible of GL_f(F_q).
inline ClassFunction cuspidal_rho0(int f, const FieldPtr& field, int rho_index) {
    const auto T = TableCache::instance().table(f, field);
    if (rho_index < 0 || rho_index >= T->size()) throw ArgumentError("rho index out of range");
    const auto& rho0 = (*T)[rho_index];
    if (!is_cuspidal(rho0)) throw ArgumentError("rho_0 must be cuspidal");
    return rho0;
}

/// Irreducible of L_B given by factor indices into the tables of GL_{n_i}(F_q).
inline LeviCharacter levi_irreducible(const BlockShape& shape, const FieldPtr& field, const std::vector<int>& index) {
    if (index.size() != shape.parts().size()) throw ArgumentError("tau index has the wrong length");
    LeviCharacter L;
    L.shape = shape.parts();
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto T = TableCache::instance().table(shape.parts()[i], field);
        if (index[i] < 0 || index[i] >= T->size()) throw ArgumentError("tau index out of range");
        L.factors.push_back((*T)[index[i]]);
    }
    return L;
}

/// dim Hom_{H(x)}(rho, tau^x) against dim Hom_{U(B_0)}(rho, tau).
inline LemmaReport lemma_check(const FieldPtr& field, int f, int e0, const BlockShape& shape_b, int rho_index,
                               const std::vector<int>& tau_index, const AffineWeylElem& x,
                               long bound = kDefaultQuotientBound, std::vector<Fq> scaling = {}) {
    const auto rho = tensor_power(cuspidal_rho0(f, field, rho_index), e0);
    const auto tau = levi_irreducible(shape_b, field, tau_index);
    const auto b0 = BlockShape::uniform(f, e0);
    const auto hx = reduced_histogram(build_intersection(b0, shape_b, x, field, bound, std::move(scaling)));
    const auto h1 = reduced_histogram(build_intersection(b0, shape_b, AffineWeylElem::identity(f, e0), field, bound));
    LemmaReport r;
    r.q = field->q();
    r.f = f;
    r.e0 = e0;
    r.shape = shape_b;
    r.rho_index = rho_index;
    r.tau_index = tau_index;
    r.x = x;
    r.left = hom_dim(rho, tau, hx);
    r.right = hom_dim(rho, tau, h1);
    r.equal = r.left == r.right;
    return r;
}

/// Outcome of the three internal claims of the lemma's proof.
struct ProofIdentityReport {
    bool containment = false;
    bool quotient = false;
    long lhs_size = 0;
    long rhs_size = 0;
    bool weyl_invariance = false;
    bool all() const { return containment && quotient && weyl_invariance; }
};

namespace detail {

/// Enumerates prod_{(i,j)} pi^{lo(i,j)} o / pi^{hi(i,j)} o as digit lists,
/// one digit per (position, index).
inline void for_each_quotient(const OrderPattern& lo, const OrderPattern& hi, int q,
                              const std::function<void(const std::vector<std::tuple<int, int, int, Fq>>&)>& fn) {
    std::vector<std::tuple<int, int, int, Fq>> slots;
    for (int i = 0; i < lo.R; ++i)
        for (int j = 0; j < lo.R; ++j)
            for (int c = lo.at(i, j); c < hi.at(i, j); ++c) slots.emplace_back(i, j, c, Fq{0});
    while (true) {
        fn(slots);
        std::size_t pos = 0;
        while (pos < slots.size() && ++std::get<3>(slots[pos]) == q) std::get<3>(slots[pos++]) = 0;
        if (pos == slots.size()) break;
    }
}

}  // namespace detail

/// (a) U^1(B_0)^d ∩ U(B) ⊆ U^1(B_0); (b) the two quotients by the 1-units
/// of B have equal size and the residue map between them is a bijection
/// onto strictly block-upper f-block matrices; (c) rho^{w^{-1}} = rho for
/// every block permutation w.
inline ProofIdentityReport proof_identity_checks(const FieldPtr& field, int f, int e0, const BlockShape& shape_b,
                                                 const AffineWeylElem& x, const ClassFunction& rho0) {
    ProofIdentityReport rep;
    const int q = field->q();
    const auto b0 = BlockShape::uniform(f, e0);
    const auto rad0 = radical_pattern(b0);
    const auto n = condition_D_normalize(x, shape_b);
    const AffineWeylElem d(f, AffineWeylElem::identity(f, e0).w, n.b);
    const auto conj = conjugate_pattern(rad0, d.inverse());

    const auto lattice_a = intersect_patterns(conj, standard_order(shape_b));
    rep.containment = lattice_a.contained_in(rad0);

    // Strictly block-upper f-block positions inside the diagonal n-blocks.
    const auto blk0 = b0.blocks();
    const auto blkb = shape_b.blocks();
    std::set<std::pair<int, int>> target;
    for (int i = 0; i < x.R(); ++i)
        for (int j = 0; j < x.R(); ++j)
            if (blkb[i] == blkb[j] && blk0[i] < blk0[j]) target.emplace(i, j);

    const auto lattice_b = intersect_patterns(conj, radical_pattern(shape_b));
    std::set<std::vector<Fq>> image;
    bool into_target = true;
    long lhs = 0;
    detail::for_each_quotient(lattice_a, lattice_b, q, [&](const auto& slots) {
        ++lhs;
        std::vector<Fq> residue;
        for (const auto& [i, j, c, v] : slots) {
            if (!target.count({i, j}) || c != lattice_a.at(i, j)) {
                if (v != 0) into_target = false;
                continue;
            }
            residue.push_back(v);
        }
        image.insert(residue);
    });
    long rhs = 0;
    detail::for_each_quotient(rad0, radical_pattern(shape_b), q, [&](const auto&) { ++rhs; });
    long target_size = 1;
    for (std::size_t t = 0; t < target.size(); ++t) target_size *= q;
    rep.lhs_size = lhs;
    rep.rhs_size = rhs;
    rep.quotient = into_target && lhs == rhs && static_cast<long>(image.size()) == lhs && lhs == target_size;

    const auto rho = tensor_power(rho0, e0);
    const int k = rho0.group->num_classes();
    rep.weyl_invariance = true;
    for (const auto& w : permutations(e0)) {
        std::vector<int> idx(e0, 0);
        while (rep.weyl_invariance) {
            std::vector<int> permuted(e0);
            for (int i = 0; i < e0; ++i) permuted[w[i]] = idx[i];
            if (rho.value(permuted) != rho.value(idx)) rep.weyl_invariance = false;
            int pos = e0 - 1;
            while (pos >= 0 && ++idx[pos] == k) idx[pos--] = 0;
            if (pos < 0) break;
        }
    }
    return rep;
}

}  // namespace parahoric
