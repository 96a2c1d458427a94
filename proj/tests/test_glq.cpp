#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "parahoric/character_table.hpp"
#include "parahoric/harish_chandra.hpp"

using namespace parahoric;

namespace {

std::shared_ptr<const CharacterTable> table(int n, int p, int k = 1) {
    return TableCache::instance().table(n, make_field(p, k));
}

std::vector<std::int64_t> degrees(const CharacterTable& T) {
    std::vector<std::int64_t> d;
    for (const auto& c : T.chars) d.push_back(c.degree());
    return d;
}

int find_character(const CharacterTable& T, const std::vector<std::int64_t>& values) {
    for (int i = 0; i < T.size(); ++i) {
        bool ok = true;
        for (int c = 0; c < T.group->num_classes(); ++c)
            if (!(T[i][c] == CycValue(values[c]))) ok = false;
        if (ok) return i;
    }
    return -1;
}

// Oracle: conjugacy classes by conjugating with every group element.
std::vector<long> brute_force_class_sizes(const FiniteGroupTable& G) {
    std::set<std::set<MatCode>> classes;
    for (MatCode g : G.elements()) {
        std::set<MatCode> cls;
        for (MatCode x : G.elements()) cls.insert(G.ops().mul(G.ops().mul(x, g), G.ops().inverse(x)));
        classes.insert(cls);
    }
    std::vector<long> sizes;
    for (const auto& c : classes) sizes.push_back(static_cast<long>(c.size()));
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

}  // namespace

TEST(Groups, OrderFormula) {
    EXPECT_EQ(gl_order(2, 2), 6);
    EXPECT_EQ(gl_order(2, 3), 48);
    EXPECT_EQ(gl_order(3, 2), 168);
    EXPECT_EQ(gl_order(4, 3), 24261120);
}

TEST(Groups, GL2F2IsS3) {
    auto G = make_group(2, make_field(2, 1));
    EXPECT_EQ(G->order(), 6);
    ASSERT_EQ(G->num_classes(), 3);
    std::vector<long> sizes;
    for (const auto& c : G->classes()) sizes.push_back(c.size);
    EXPECT_EQ(sizes, (std::vector<long>{1, 3, 2}));
    EXPECT_EQ(G->class_rep(0), G->ops().identity());
    EXPECT_EQ(G->exponent(), 6);
}

TEST(Groups, SmallCases) {
    auto G13 = make_group(1, make_field(3, 1));
    EXPECT_EQ(G13->order(), 2);
    EXPECT_EQ(G13->num_classes(), 2);
    auto G23 = make_group(2, make_field(3, 1));
    EXPECT_EQ(G23->order(), 48);
    EXPECT_EQ(G23->num_classes(), 8);
    EXPECT_EQ(G23->center_classes().size(), 2u);
}

TEST(Groups, ClassesMatchBruteForce) {
    for (auto [n, p, k] : std::vector<std::tuple<int, int, int>>{{2, 2, 1}, {2, 3, 1}, {2, 2, 2}, {3, 2, 1}}) {
        auto G = make_group(n, make_field(p, k));
        std::vector<long> sizes;
        for (const auto& c : G->classes()) sizes.push_back(c.size);
        std::sort(sizes.begin(), sizes.end());
        EXPECT_EQ(sizes, brute_force_class_sizes(*G)) << n << " " << p << "^" << k;
    }
}

TEST(Groups, SizeLimit) {
    EXPECT_THROW(make_group(4, make_field(3, 1)), SizeLimitError);
    EXPECT_THROW(make_group(3, make_field(3, 1), 1000), SizeLimitError);
}

TEST(Groups, SimilarityKeySeparatesClasses) {
    for (auto [n, p, k] : std::vector<std::tuple<int, int, int>>{{2, 3, 1}, {3, 2, 1}, {2, 2, 2}, {3, 3, 1}}) {
        auto G = make_group(n, make_field(p, k));
        SimilarityKeyer keyer(G->ops());
        std::map<std::vector<int>, int> key_to_class;
        for (int i = 0; i < G->order(); ++i) {
            const auto key = keyer.key(G->elements()[i]);
            auto [it, inserted] = key_to_class.emplace(key, G->class_of_index(i));
            ASSERT_EQ(it->second, G->class_of_index(i));
        }
        EXPECT_EQ(static_cast<int>(key_to_class.size()), G->num_classes());
    }
}

TEST(Groups, MonicIrreducibleCounts) {
    // Necklace counts: q=2 gives 2,1,2,3 in degrees 1..4.
    auto irr = monic_irreducibles(*make_field(2, 1), 4);
    EXPECT_EQ(irr.size(), 8u);
    EXPECT_EQ(monic_irreducibles(*make_field(3, 1), 2).size(), 3u + 3u);
}

TEST(CharacterTables, S3) {
    auto T = table(2, 2);
    EXPECT_EQ(degrees(*T), (std::vector<std::int64_t>{1, 1, 2}));
    EXPECT_GE(find_character(*T, {1, 1, 1}), 0);
    EXPECT_GE(find_character(*T, {1, -1, 1}), 0);
    EXPECT_GE(find_character(*T, {2, 0, -1}), 0);
}

TEST(CharacterTables, CyclicGroups) {
    for (int p : {2, 3, 5}) {
        auto T = table(1, p);
        EXPECT_EQ(T->size(), p - 1);
        for (const auto& c : T->chars) EXPECT_EQ(c.degree(), 1);
        EXPECT_TRUE(verify_orthogonality(*T));
    }
    auto T4 = table(1, 2, 2);
    EXPECT_EQ(T4->size(), 3);
}

TEST(CharacterTables, GL2F3Degrees) {
    auto T = table(2, 3);
    EXPECT_EQ(degrees(*T), (std::vector<std::int64_t>{1, 1, 2, 2, 2, 3, 3, 4}));
    EXPECT_TRUE(verify_orthogonality(*T));
}

TEST(CharacterTables, OrthogonalityAcrossSuite) {
    for (auto [n, p, k] : std::vector<std::tuple<int, int, int>>{{2, 2, 1}, {2, 2, 2}, {3, 2, 1}, {2, 5, 1}}) {
        auto T = table(n, p, k);
        EXPECT_TRUE(verify_orthogonality(*T)) << n << " " << p << "^" << k;
    }
}

TEST(CharacterTables, Determinism) {
    auto G = make_group(2, make_field(3, 1));
    auto T1 = character_table(G);
    auto T2 = character_table(G);
    ASSERT_EQ(T1.size(), T2.size());
    for (int i = 0; i < T1.size(); ++i) EXPECT_EQ(T1[i], T2[i]);
}

TEST(Cuspidality, GL2F2) {
    auto T = table(2, 2);
    EXPECT_FALSE(is_cuspidal((*T)[find_character(*T, {1, 1, 1})]));
    EXPECT_TRUE(is_cuspidal((*T)[find_character(*T, {1, -1, 1})]));
    EXPECT_FALSE(is_cuspidal((*T)[find_character(*T, {2, 0, -1})]));
}

TEST(Cuspidality, CountsForGL2) {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        auto T = table(2, p, k);
        const int q = T->group->q();
        const auto cusp = cuspidal_indices(*T);
        EXPECT_EQ(static_cast<int>(cusp.size()), q * (q - 1) / 2);
        for (int i : cusp) EXPECT_EQ((*T)[i].degree(), q - 1);
    }
}

TEST(Cuspidality, GL3F2HasTwo) {
    auto T = table(3, 2);
    EXPECT_EQ(cuspidal_indices(*T).size(), 2u);
}

TEST(Cuspidality, GL1AlwaysCuspidal) {
    auto T = table(1, 3);
    EXPECT_EQ(cuspidal_indices(*T).size(), 2u);
}

TEST(CuspidalSupport, PrincipalSeriesOfGL2F2) {
    auto T = table(2, 2);
    auto T1 = table(1, 2);
    const LeviCharacter torus_trivial = tensor_power((*T1)[0], 2);
    LeviCharacter triv{{2}, {(*T)[find_character(*T, {1, 1, 1})]}};
    LeviCharacter stdc{{2}, {(*T)[find_character(*T, {2, 0, -1})]}};
    LeviCharacter sign{{2}, {(*T)[find_character(*T, {1, -1, 1})]}};
    EXPECT_TRUE(cuspidal_support_matches(triv, torus_trivial));
    EXPECT_TRUE(cuspidal_support_matches(stdc, torus_trivial));
    EXPECT_FALSE(cuspidal_support_matches(sign, torus_trivial));
}

TEST(CuspidalSupport, CuspidalsOfGL2F3HaveNoTorusSupport) {
    auto T = table(2, 3);
    auto T1 = table(1, 3);
    for (int i : cuspidal_indices(*T)) {
        LeviCharacter tau{{2}, {(*T)[i]}};
        for (int a = 0; a < T1->size(); ++a)
            for (int b = 0; b < T1->size(); ++b) {
                LeviCharacter rho{{1, 1}, {(*T1)[a], (*T1)[b]}};
                EXPECT_FALSE(cuspidal_support_matches(tau, rho));
            }
    }
}

TEST(CuspidalSupport, IdentityCase) {
    auto T = table(2, 3);
    for (int i : cuspidal_indices(*T)) {
        const auto rho = tensor_power((*T)[i], 1);
        EXPECT_TRUE(cuspidal_support_matches(rho, rho));
        EXPECT_EQ(support_multiplicity(rho, rho), 1);
    }
}

TEST(CuspidalSupport, InductionMatchesFrobeniusReciprocity) {
    for (auto [n, p] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        auto T = table(n, p);
        auto T1 = table(1, p);
        for (int a = 0; a < T1->size(); ++a) {
            const auto rho = tensor_power((*T1)[a], n);
            std::int64_t total = 0;
            for (const auto& tau : T->chars) {
                const auto m1 = induction_multiplicity(tau, rho);
                EXPECT_EQ(m1, frobenius_multiplicity(tau, rho));
                total += m1 * tau.degree();
            }
            // dim Ind_B^G = [G:B].
            EXPECT_EQ(total, T->group->order() / static_cast<std::int64_t>(parabolic_elements(*T->group, std::vector<int>(n, 1)).size()));
        }
    }
}

TEST(CuspidalSupport, GL2F3QuadraticCharacterGivesTwoConstituents) {
    auto T = table(2, 3);
    auto T1 = table(1, 3);
    int nontrivial = -1;
    for (int a = 0; a < T1->size(); ++a)
        if (!((*T1)[a] == trivial_character(T1->group))) nontrivial = a;
    const auto rho = tensor_power((*T1)[nontrivial], 2);
    int constituents = 0;
    for (const auto& tau : T->chars)
        if (induction_multiplicity(tau, rho) > 0) {
            EXPECT_EQ(induction_multiplicity(tau, rho), 1);
            ++constituents;
        }
    EXPECT_EQ(constituents, 2);
}

TEST(HomDim, BorelOfGL2F2) {
    auto T = table(2, 2);
    const auto& G = *T->group;
    ProjectionHistogram H;
    for (MatCode b : parabolic_elements(G, {1, 1})) H.add({G.class_of(b)}, {G.class_of(b)});
    EXPECT_EQ(H.order, 2);
    LeviCharacter triv{{2}, {(*T)[find_character(*T, {1, 1, 1})]}};
    LeviCharacter stdc{{2}, {(*T)[find_character(*T, {2, 0, -1})]}};
    LeviCharacter sign{{2}, {(*T)[find_character(*T, {1, -1, 1})]}};
    EXPECT_EQ(hom_dim(triv, stdc, H), 1);
    EXPECT_EQ(hom_dim(triv, sign, H), 0);
    EXPECT_EQ(hom_dim(triv, triv, H), 1);
}

TEST(HomDim, FullGroupOrthonormality) {
    auto T = table(2, 3);
    const auto& G = *T->group;
    ProjectionHistogram H;
    for (MatCode g : G.elements()) H.add({G.class_of(g)}, {G.class_of(g)});
    for (int i = 0; i < T->size(); ++i)
        for (int j = 0; j < T->size(); ++j)
            EXPECT_EQ(hom_dim(LeviCharacter{{2}, {(*T)[i]}}, LeviCharacter{{2}, {(*T)[j]}}, H), i == j ? 1 : 0);
}

TEST(HomDim, NonIntegerIsAnInvariantViolation) {
    auto T = table(2, 2);
    // Not the histogram of a group: the average of the standard character is -1/2.
    ProjectionHistogram H;
    H.add({0}, {1});
    H.add({0}, {2});
    LeviCharacter triv{{2}, {(*T)[find_character(*T, {1, 1, 1})]}};
    LeviCharacter stdc{{2}, {(*T)[find_character(*T, {2, 0, -1})]}};
    EXPECT_THROW(hom_dim(triv, stdc, H), InvariantError);
}
