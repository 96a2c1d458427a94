#include <gtest/gtest.h>

#include "parahoric/building.hpp"

using namespace parahoric;

namespace {

// Oracle: every normalized lattice with pi^r L_0 <= L, enumerated over all
// triangular bases with diagonal pi^{k_i}, k_i <= r, and entries reduced
// modulo pi^{k_i}; deduplicated by normal form.
std::set<std::vector<int>> ball_by_brute_force(const SeriesRing& S, int R, int r) {
    const int q = S.field().q();
    std::set<std::vector<int>> out;
    std::vector<int> k(R, 0);
    while (true) {
        std::vector<std::pair<int, int>> slots;  // (position i*R+j, coefficient index)
        for (int i = 0; i < R; ++i)
            for (int j = i + 1; j < R; ++j)
                for (int t = 0; t < k[i]; ++t) slots.emplace_back(i * R + j, t);
        std::vector<Fq> digits(slots.size(), 0);
        while (true) {
            std::vector<SeriesVec> cols(R, SeriesVec(R));
            for (int j = 0; j < R; ++j) cols[j][j] = S.monomial(k[j]);
            for (std::size_t s = 0; s < slots.size(); ++s)
                cols[slots[s].first % R][slots[s].first / R].c[slots[s].second] = digits[s];
            const Lattice L = hnf(S, R, cols);
            if (normalize_class(S, L).key() == L.key() && elementary_spread(S, L) <= r) out.insert(L.key());
            std::size_t pos = 0;
            while (pos < digits.size() && ++digits[pos] == q) digits[pos++] = 0;
            if (pos == digits.size()) break;
        }
        int pos = R - 1;
        while (pos >= 0 && ++k[pos] > r) k[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

}  // namespace

TEST(Lattice, HermiteFormIsCanonical) {
    const auto F = make_field(3, 1);
    const SeriesRing S(F, 6);
    // Two generating sets of the same lattice.
    std::vector<SeriesVec> a{{S.monomial(0), S.monomial(1)}, {S.monomial(0, 0), S.monomial(2)}};
    std::vector<SeriesVec> b{{S.monomial(0, 2), S.monomial(1, 2)}, {S.add(S.monomial(0), S.monomial(2)), S.add(S.monomial(1), S.monomial(2))}};
    EXPECT_EQ(hnf(S, 2, a).key(), hnf(S, 2, b).key());
    // Vectors with zero second coordinate are multiples of (pi, 0).
    const auto L = hnf(S, 2, a);
    EXPECT_EQ(L.k, (std::vector<int>{1, 1}));
}

TEST(Lattice, MembershipAndNormalization) {
    const auto F = make_field(2, 1);
    const SeriesRing S(F, 6);
    std::vector<SeriesVec> gens{{S.monomial(1), S.monomial(1)}, {S.monomial(0, 0), S.monomial(2)}};
    const auto L = hnf(S, 2, gens);
    EXPECT_TRUE(lattice_contains(S, L, {S.monomial(1), S.monomial(1)}));
    EXPECT_FALSE(lattice_contains(S, L, {S.monomial(1), S.monomial(0, 0)}));
    const auto N = normalize_class(S, L);
    EXPECT_EQ(L.k, (std::vector<int>{2, 1}));
    EXPECT_EQ(N.k, (std::vector<int>{1, 0}));
    EXPECT_EQ(elementary_spread(S, N), 1);
}

TEST(TruncatedBuilding, TreeBalls) {
    for (int q : {2, 3}) {
        const auto X = truncated_building(2, field_of_order(q), 1);
        EXPECT_EQ(X.vertices().size(), static_cast<std::size_t>(q + 2));
        EXPECT_EQ(X.simplices(1).size(), static_cast<std::size_t>(q + 1));
        EXPECT_EQ(X.dimension(), 1);
        EXPECT_EQ(X.vertices()[0].key(), (std::vector<int>{0, 0}));
    }
    // Radius 2: 1 + (q+1) + (q+1) q vertices, a tree.
    const auto X = truncated_building(2, make_field(3, 1), 2);
    EXPECT_EQ(X.vertices().size(), 1u + 4u + 12u);
    EXPECT_EQ(X.simplices(1).size(), X.vertices().size() - 1);
}

TEST(TruncatedBuilding, BallMatchesBruteForceAndSpread) {
    for (auto [R, q, r] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {3, 2, 1}, {3, 2, 2}, {3, 3, 1}}) {
        const auto X = truncated_building(R, field_of_order(q), r);
        std::set<std::vector<int>> keys;
        for (std::size_t v = 0; v < X.vertices().size(); ++v) {
            keys.insert(X.vertices()[v].key());
            EXPECT_EQ(elementary_spread(X.ring(), X.vertices()[v]), X.distances()[v]);
        }
        EXPECT_EQ(keys, ball_by_brute_force(X.ring(), R, r)) << R << " " << q << " " << r;
    }
}

TEST(TruncatedBuilding, Rank3Structure) {
    const auto X = truncated_building(3, make_field(2, 1), 1);
    // Standard vertex plus the points and lines of the projective plane.
    EXPECT_EQ(X.vertices().size(), 1u + 7u + 7u);
    EXPECT_EQ(X.dimension(), 2);
    for (const auto& e : X.simplices(1)) {
        int triangles = 0;
        for (const auto& t : X.simplices(2))
            if (std::includes(t.begin(), t.end(), e.begin(), e.end())) ++triangles;
        EXPECT_GE(triangles, 1);
    }
}

TEST(TruncatedBuilding, FacesAreClosed) {
    const auto X = truncated_building(3, make_field(3, 1), 1);
    for (int d = 1; d <= X.dimension(); ++d)
        for (const auto& s : X.simplices(d))
            for (std::size_t i = 0; i < s.size(); ++i) {
                auto face = s;
                face.erase(face.begin() + static_cast<long>(i));
                EXPECT_TRUE(X.has_simplex(face));
            }
}

TEST(OrderDictionary, StandardSimplices) {
    const auto X = truncated_building(2, make_field(2, 1), 1);
    EXPECT_EQ(simplex_order_dictionary(X, {0}), standard_order(BlockShape({2})));
    const int v1 = X.index_of(standard_chamber_vertex(X, 1));
    ASSERT_GE(v1, 0);
    EXPECT_EQ(simplex_order_dictionary(X, {0, v1}), standard_order(BlockShape({1, 1})));
}

TEST(OrderDictionary, TriangleFacesReverseInclusion) {
    const auto X = truncated_building(3, make_field(2, 1), 1);
    for (const auto& t : X.simplices(2)) {
        const auto so = X.simplex_order(t);
        EXPECT_EQ(so.shape, BlockShape({1, 1, 1}));
        // Each edge's order, evaluated in the triangle's adapted basis, contains the triangle's.
        for (std::size_t i = 0; i < 3; ++i) {
            auto e = t;
            e.erase(e.begin() + static_cast<long>(i));
            const auto stab = X.stabilized_vertices(e);
            EXPECT_EQ(stab, e);
            for (int v : t) EXPECT_TRUE(X.order_stabilizes(so, X.vertices()[v]));
        }
    }
}

TEST(OrderDictionary, InclusionReversalIsExhaustive) {
    for (auto [R, q, r] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 3, 1}, {3, 2, 1}}) {
        const auto X = truncated_building(R, field_of_order(q), r);
        std::vector<std::vector<int>> all;
        for (const auto& level : X.simplices())
            for (const auto& s : level) all.push_back(s);
        std::vector<std::vector<int>> inv;
        for (const auto& s : all) inv.push_back(X.stabilized_vertices(s));
        for (std::size_t a = 0; a < all.size(); ++a) {
            EXPECT_EQ(inv[a], all[a]);
            for (std::size_t b = 0; b < all.size(); ++b) {
                const bool face = std::includes(all[b].begin(), all[b].end(), all[a].begin(), all[a].end());
                const bool reversed = std::includes(inv[b].begin(), inv[b].end(), all[a].begin(), all[a].end());
                EXPECT_EQ(face, reversed);
            }
        }
    }
}

TEST(TruncatedBuilding, Limits) {
    EXPECT_THROW(truncated_building(4, make_field(2, 1), 1), SizeLimitError);
    EXPECT_THROW(truncated_building(2, make_field(2, 1), 3), SizeLimitError);
    EXPECT_THROW(truncated_building(5, make_field(2, 1), 1, {5, 2}), SizeLimitError);
    EXPECT_THROW(truncated_building(2, make_field(2, 1), 5, {3, 5}), SizeLimitError);
    // Raised limits: R = 4 ball of radius 1 has 1 + (15 + 35 + 15) vertices over F_2.
    const auto X = truncated_building(4, make_field(2, 1), 1, {4, 2});
    EXPECT_EQ(X.vertices().size(), 66u);
    EXPECT_EQ(X.dimension(), 3);
    EXPECT_EQ(truncated_building(2, make_field(2, 1), 3, {3, 3}).vertices().size(), 1u + 3u + 6u + 12u);
}
