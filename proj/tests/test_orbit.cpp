#include <gtest/gtest.h>

#include "parahoric/building.hpp"
#include "parahoric/orbit.hpp"

using namespace parahoric;

namespace {

// Index of the GL_2(F_2) irreducible of the given degree; for degree 1,
// `trivial_on_involutions` separates the trivial and sign characters.
int gl2f2_index(int degree, bool trivial_on_involutions) {
    const auto T = TableCache::instance().table(2, make_field(2, 1));
    const auto& G = *T->group;
    int inv = -1;
    for (int c = 0; c < G.num_classes(); ++c)
        if (G.classes()[c].element_order == 2) inv = c;
    for (int i = 0; i < T->size(); ++i)
        if ((*T)[i].degree() == degree && (degree != 1 || ((*T)[i][inv] == CycValue(1)) == trivial_on_involutions)) return i;
    return -1;
}

}  // namespace

TEST(ChamberFaces, PatternsAndShapes) {
    EXPECT_EQ(chamber_face_pattern(2, {2}), standard_order(BlockShape({2})));
    EXPECT_EQ(chamber_face_pattern(2, {1, 2}), standard_order(BlockShape({1, 1})));
    EXPECT_EQ(chamber_face_pattern(2, {1}), OrderPattern(2, {0, -1, 1, 0}));
    EXPECT_EQ(chamber_faces(1, 3).size(), 7u);
    const auto fo = face_order(1, 2, {1});
    EXPECT_EQ(fo.shape, BlockShape({2}));
    EXPECT_EQ(conjugate_pattern(standard_order(fo.shape), fo.y), chamber_face_pattern(2, {1}));
    EXPECT_TRUE(face_order(1, 3, {1, 3}).y.is_identity());
    EXPECT_EQ(face_order(1, 3, {1, 3}).shape, BlockShape({1, 2}));
    EXPECT_THROW(chamber_face_pattern(2, {}), ArgumentError);
    EXPECT_THROW(chamber_face_pattern(2, {3}), ArgumentError);
}

TEST(ChamberFaces, MatchBuildingVertices) {
    const auto X = truncated_building(3, make_field(2, 1), 1);
    std::vector<int> idx;
    for (int m = 1; m <= 3; ++m) idx.push_back(X.index_of(standard_chamber_vertex(X, m)));
    std::sort(idx.begin(), idx.end());
    EXPECT_TRUE(X.has_simplex(idx));
    EXPECT_EQ(X.simplex_order(idx).shape, face_order(1, 3, {1, 2, 3}).shape);
}

TEST(ConjugatedLeviBlocks, AgreesWithReadTable) {
    const auto F = make_field(3, 1);
    const auto glf = TableCache::instance().table(1, F)->group;
    for (const auto& shape : intermediate_shapes(1, 3))
        for (const auto& x : weyl_representatives(3, 1, 1)) {
            const auto m = build_intersection(BlockShape::uniform(1, 3), shape, x, F, kDefaultQuotientBound, {1, 2, 2});
            m.for_each_element(*glf, [&](const DigitMatrix& D) { ASSERT_EQ(m.prB(D), conjugated_levi_blocks(m, D)); });
        }
}

TEST(CoefficientSpec, WorkedExample) {
    const auto F = make_field(2, 1);
    const int triv = gl2f2_index(1, true), stdr = gl2f2_index(2, true), sign = gl2f2_index(1, false);
    ASSERT_GE(triv, 0);
    ASSERT_GE(stdr, 0);
    ASSERT_GE(sign, 0);
    const DepthZeroCoefficientSpec spec(F, 1, 2, 0, {2}, {{triv}, {stdr}});
    EXPECT_EQ(spec.module_dimension(), 3);
    const auto rep = orbit_dimension_check(spec, AffineWeylElem(1, {0, 1}, {1, 0}));
    EXPECT_EQ(rep.direct, 2);
    EXPECT_EQ(rep.predicted, 2);
    EXPECT_EQ(rep.at_identity, 2);
    EXPECT_TRUE(rep.equal);
    // The sign-type character is cuspidal: its support is not rho.
    EXPECT_THROW(DepthZeroCoefficientSpec(F, 1, 2, 0, {2}, {{sign}}), ArgumentError);
    EXPECT_EQ(support_taus(F, 1, 2, 0, {2}).size(), 2u);
}

TEST(CoefficientSpec, IdentityGivesIwahoriMultiplicities) {
    for (int q : {2, 3}) {
        const auto F = field_of_order(q);
        for (int ri : cuspidal_indices(*TableCache::instance().table(1, F))) {
            const auto taus = support_taus(F, 1, 3, ri, {3});
            const DepthZeroCoefficientSpec spec(F, 1, 3, ri, {3}, taus);
            const auto rep = orbit_dimension_check(spec, AffineWeylElem::identity(1, 3));
            std::int64_t expect = 0;
            for (const auto& t : taus) expect += frobenius_multiplicity(spec.tau(t).factors[0], spec.rho());
            EXPECT_EQ(rep.direct, expect);
            EXPECT_EQ(rep.predicted, expect);
        }
    }
}

TEST(OrbitSweep, SmallGrid) {
    const auto cells = orbit_sweep({{2, 3}, {2}, 1, 1, 0});
    // Per q: |cuspidal rho_0| x 3 faces x 2 permutations x 3 exponent vectors.
    EXPECT_EQ(cells.size(), 1u * 18u + 2u * 18u);
    for (const auto& c : cells) {
        EXPECT_TRUE(c.error.empty()) << c.error;
        EXPECT_TRUE(c.equal);
        EXPECT_EQ(c.predicted, c.at_identity);
    }
}
