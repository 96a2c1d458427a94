#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <tuple>

#include "parahoric/chains.hpp"

using namespace parahoric;

TEST(OrientedChain, SignRule) {
    OrientedChain w(2);
    w.add({3, 1, 2}, CoeffVec{{0, 5}});
    // (3,1,2) -> (1,2,3) is an even permutation.
    EXPECT_EQ(w.value({1, 2, 3}), (CoeffVec{{0, 5}}));
    EXPECT_EQ(w.value({2, 1, 3}), (CoeffVec{{0, -5}}));
    w.add({1, 3, 2}, CoeffVec{{0, 5}});
    EXPECT_TRUE(w.is_zero());
    EXPECT_THROW(w.add({1, 1, 2}, CoeffVec{{0, 1}}), ArgumentError);
    EXPECT_THROW(w.add({1, 2}, CoeffVec{{0, 1}}), ArgumentError);
}

TEST(Boundary, ZeroAndTriangle) {
    const auto X = truncated_building(3, make_field(2, 1), 1);
    EXPECT_TRUE(boundary(X, OrientedChain(1)).is_zero());
    const auto t = X.simplices(2).front();
    OrientedChain w(2);
    w.add(t, CoeffVec{{0, 1}});
    const auto d = boundary(X, w);
    ASSERT_EQ(d.terms().size(), 3u);
    EXPECT_EQ(d.value({t[1], t[2]}), (CoeffVec{{0, 1}}));
    EXPECT_EQ(d.value({t[0], t[2]}), (CoeffVec{{0, -1}}));
    EXPECT_EQ(d.value({t[0], t[1]}), (CoeffVec{{0, 1}}));
    EXPECT_TRUE(boundary(X, d).is_zero());
    EXPECT_THROW(boundary(X, OrientedChain(0)), ArgumentError);
    EXPECT_THROW(boundary(X, OrientedChain(3)), ArgumentError);
}

TEST(Augmentation, Basics) {
    EXPECT_TRUE(augmentation(OrientedChain(0)).empty());
    OrientedChain v(0);
    v.add({4}, CoeffVec{{0, 7}});
    EXPECT_EQ(augmentation(v), (CoeffVec{{0, 7}}));
    const auto X = truncated_building(2, make_field(3, 1), 1);
    OrientedChain e(1);
    for (const auto& s : X.simplices(1)) e.add(s, CoeffVec{{0, 2}});
    EXPECT_TRUE(augmentation(boundary(X, e)).empty());
    EXPECT_THROW(augmentation(e), ArgumentError);
}

TEST(CoefficientSystems, NeighborSpacesShrinkWithSimplices) {
    const auto X = truncated_building(3, make_field(2, 1), 1);
    const NeighborSystem C(X);
    // The standard vertex is adjacent to everything in the radius-1 ball.
    EXPECT_EQ(C.basis({0}).size(), X.vertices().size());
    for (const auto& t : X.simplices(2)) {
        const auto b = C.basis(t);
        EXPECT_TRUE(std::includes(b.begin(), b.end(), t.begin(), t.end()));
    }
}

TEST(SimplicialChecks, AllSmallTruncations) {
    for (auto [R, q, r] : std::vector<std::tuple<int, int, int>>{{2, 2, 1}, {2, 3, 2}, {3, 2, 1}, {3, 3, 1}}) {
        const auto X = truncated_building(R, field_of_order(q), r);
        for (int sys = 0; sys < 2; ++sys) {
            const ScalarSystem scalar;
            const NeighborSystem nb(X);
            const CoefficientSystem& C = sys == 0 ? static_cast<const CoefficientSystem&>(scalar) : nb;
            const auto rep = simplicial_checks(X, C);
            EXPECT_TRUE(rep.passed()) << R << " " << q << " " << r << " " << C.name();
            EXPECT_GT(rep.eps_basis, 0);
            if (R == 3) {
                EXPECT_GT(rep.dd_basis, 0);
            }
            EXPECT_EQ(rep.reversal_pairs, static_cast<std::int64_t>(std::pow(std::accumulate(rep.simplex_counts.begin(), rep.simplex_counts.end(), std::size_t{0}), 2)));
        }
    }
}

TEST(SimplicialChecks, DetectsBrokenSystem) {
    // A system that grows with simplices violates face inclusion.
    struct Growing final : CoefficientSystem {
        std::string name() const override { return "growing"; }
        std::vector<int> basis(const std::vector<int>& s) const override {
            std::vector<int> b(s.size());
            std::iota(b.begin(), b.end(), 0);
            return b;
        }
    };
    const auto X = truncated_building(2, make_field(2, 1), 1);
    EXPECT_FALSE(simplicial_checks(X, Growing{}).passed());
}
