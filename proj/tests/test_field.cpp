#include <gtest/gtest.h>

#include <random>

#include "parahoric/field.hpp"

using namespace parahoric;

namespace {

TruncRingElem elem(const FieldPtr& F, std::vector<Fq> c) { return TruncRingElem(F, std::move(c)); }

}  // namespace

TEST(Field, PrimeFields) {
    auto F2 = make_field(2, 1);
    EXPECT_EQ(F2->q(), 2);
    EXPECT_EQ(F2->modulus().size(), 2u);
    auto F3 = make_field(3, 1);
    EXPECT_EQ(F3->q(), 3);
    EXPECT_EQ(F3->add(2, 2), 1);
    EXPECT_EQ(F3->mul(2, 2), 1);
}

TEST(Field, LexLeastModulus) {
    EXPECT_EQ(make_field(2, 2)->modulus(), (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(make_field(3, 2)->modulus(), (std::vector<int>{1, 0, 1}));
    EXPECT_EQ(make_field(2, 3)->modulus(), (std::vector<int>{1, 1, 0, 1}));
}

TEST(Field, F4MultiplicativeGroupCyclicOfOrder3) {
    auto F = make_field(2, 2);
    ASSERT_EQ(F->q(), 4);
    int elements_of_order_3 = 0;
    for (Fq x = 1; x < 4; ++x) {
        EXPECT_EQ(F->mul(x, F->mul(x, x)), 1);
        if (x != 1 && F->mul(x, x) != 1) ++elements_of_order_3;
    }
    EXPECT_EQ(elements_of_order_3, 2);
}

TEST(Field, ExhaustiveAxiomsUpToNine) {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
        auto F = make_field(p, k);
        const int q = F->q();
        for (int a = 0; a < q; ++a) {
            EXPECT_EQ(F->add(a, 0), a);
            EXPECT_EQ(F->mul(a, 1), a);
            EXPECT_EQ(F->add(a, F->neg(a)), 0);
            if (a != 0) {
                EXPECT_EQ(F->mul(a, F->inv(a)), 1);
            }
            for (int b = 0; b < q; ++b) {
                EXPECT_EQ(F->add(a, b), F->add(b, a));
                EXPECT_EQ(F->mul(a, b), F->mul(b, a));
                if (a != 0 && b != 0) {
                    EXPECT_NE(F->mul(a, b), 0);
                }
                for (int c = 0; c < q; ++c) {
                    ASSERT_EQ(F->add(F->add(a, b), c), F->add(a, F->add(b, c)));
                    ASSERT_EQ(F->mul(F->mul(a, b), c), F->mul(a, F->mul(b, c)));
                    ASSERT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
                }
            }
        }
        int order = 1;
        for (Fq x = F->generator(); x != 1; x = F->mul(x, F->generator())) ++order;
        EXPECT_EQ(order, q - 1);
    }
}

TEST(Field, Errors) {
    EXPECT_THROW(make_field(4, 1), ArgumentError);
    EXPECT_THROW(make_field(2, 0), ArgumentError);
    EXPECT_THROW(make_field(5, 2), SizeLimitError);
    EXPECT_NO_THROW(make_field(5, 2, 25));
    EXPECT_THROW(make_field(2, 1)->inv(0), NotAUnitError);
}

TEST(TruncRing, ValuationExamples) {
    auto F = make_field(2, 1);
    EXPECT_EQ(valuation(TruncRingElem(F, 3)), 3);
    EXPECT_EQ(valuation(elem(F, {0, 1, 1})), 1);
    EXPECT_EQ(valuation(elem(F, {0, 1, 0}) * elem(F, {0, 0, 1})), 3);
}

TEST(TruncRing, ValuationOfProductExhaustive) {
    auto F = make_field(2, 1);
    const int M = 3;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            auto x = elem(F, {Fq(a & 1), Fq((a >> 1) & 1), Fq((a >> 2) & 1)});
            auto y = elem(F, {Fq(b & 1), Fq((b >> 1) & 1), Fq((b >> 2) & 1)});
            EXPECT_EQ(valuation(x * y), std::min(valuation(x) + valuation(y), M));
        }
}

TEST(TruncRing, ScalarInverse) {
    auto F = make_field(3, 1);
    auto x = elem(F, {2, 1, 0, 2});
    auto y = inverse(x);
    EXPECT_EQ(x * y, TruncRingElem::constant(F, 4, 1));
    EXPECT_THROW(inverse(elem(F, {0, 1, 0, 0})), NotAUnitError);
}

TEST(TruncMatrix, InvertIdentity) {
    auto F = make_field(2, 1);
    auto I = TruncMatrix::identity(F, 3, 4);
    EXPECT_EQ(mat_invert(I), I);
}

TEST(TruncMatrix, InvertDiagOnePlusPi) {
    auto F = make_field(2, 1);
    TruncMatrix A = TruncMatrix::identity(F, 2, 3);
    A.at(1, 1) = elem(F, {1, 1, 0});
    TruncMatrix expected = TruncMatrix::identity(F, 2, 3);
    expected.at(1, 1) = elem(F, {1, 1, 1});
    EXPECT_EQ(mat_invert(A), expected);
}

TEST(TruncMatrix, SingularResidueThrows) {
    auto F = make_field(2, 1);
    TruncMatrix A = TruncMatrix::identity(F, 2, 3);
    A.at(1, 1) = elem(F, {0, 1, 0});
    EXPECT_THROW(mat_invert(A), NotAUnitError);
}

TEST(TruncMatrix, RandomInversesMultiplyToIdentity) {
    std::mt19937_64 rng(20240611);
    for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
        auto F = make_field(p, k);
        std::uniform_int_distribution<int> coef(0, F->q() - 1);
        for (int R = 1; R <= 4; ++R)
            for (int M = 1; M <= 4; ++M) {
                int done = 0;
                while (done < 10) {
                    TruncMatrix A(F, R, M);
                    for (int i = 0; i < R; ++i)
                        for (int j = 0; j < R; ++j) {
                            std::vector<Fq> c(M);
                            for (auto& v : c) v = static_cast<Fq>(coef(rng));
                            A.at(i, j) = TruncRingElem(F, c);
                        }
                    try {
                        TruncMatrix B = mat_invert(A);
                        const auto I = TruncMatrix::identity(F, R, M);
                        ASSERT_EQ(A * B, I);
                        ASSERT_EQ(B * A, I);
                        ++done;
                    } catch (const NotAUnitError&) {
                    }
                }
            }
    }
}
