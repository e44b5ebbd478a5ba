#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rmlkit/field.hpp"

using namespace rmlkit;

namespace {

struct TowerCase {
    unsigned p, h, m;
};

// every tower here has q^m <= 2^12
const std::vector<TowerCase> kSmallTowers = {{2, 1, 2}, {2, 1, 3}, {2, 1, 4}, {2, 1, 6}, {2, 1, 8}, {2, 1, 12},
                                             {3, 1, 2}, {3, 1, 4}, {3, 1, 7}, {5, 1, 3}, {7, 1, 4}, {2, 2, 2},
                                             {2, 2, 3}, {2, 2, 6}, {3, 2, 3}, {2, 3, 4}, {13, 1, 3}};

class TowerTest : public ::testing::TestWithParam<TowerCase> {
   protected:
    TowerPtr t = FieldTower::make(GetParam().p, GetParam().h, GetParam().m);
};

std::string tower_name(const ::testing::TestParamInfo<TowerCase>& info) {
    return "p" + std::to_string(info.param.p) + "h" + std::to_string(info.param.h) + "m" + std::to_string(info.param.m);
}

}  // namespace

TEST_P(TowerTest, MultiplicationMatchesSchoolbookOracle) {
    const GaloisField& F = t->ext();
    const oracle::Field O(F);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Code> pick(0, F.order() - 1);
    const bool exhaustive = F.order() <= 256;
    const std::uint64_t trials = exhaustive ? std::uint64_t{F.order()} * F.order() : 20000;
    for (std::uint64_t s = 0; s < trials; ++s) {
        const Code a = exhaustive ? static_cast<Code>(s / F.order()) : pick(rng);
        const Code b = exhaustive ? static_cast<Code>(s % F.order()) : pick(rng);
        ASSERT_EQ(F.mul(a, b), O.mul(a, b)) << a << " * " << b;
        ASSERT_EQ(F.add(a, b), O.add(a, b));
    }
}

TEST_P(TowerTest, PairwiseAxiomsExhaustive) {
    const GaloisField& F = t->ext();
    const Code n = F.order();
    for (Code a = 0; a < n; ++a) {
        ASSERT_EQ(F.add(a, F.neg(a)), 0U);
        ASSERT_EQ(F.mul(a, 1), a);
        ASSERT_EQ(F.add(a, 0), a);
        if (a != 0) {
            ASSERT_EQ(F.mul(a, F.inv(a)), 1U) << a;
        }
        for (Code b = a; b < n; ++b) {
            ASSERT_EQ(F.add(a, b), F.add(b, a));
            ASSERT_EQ(F.mul(a, b), F.mul(b, a));
            if (a != 0 && b != 0) {
                ASSERT_NE(F.mul(a, b), 0U);
            }
        }
    }
}

TEST_P(TowerTest, TripleAxioms) {
    const GaloisField& F = t->ext();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Code> pick(0, F.order() - 1);
    const bool exhaustive = F.order() <= 64;
    const std::uint64_t n = F.order();
    const std::uint64_t trials = exhaustive ? n * n * n : 200000;
    for (std::uint64_t s = 0; s < trials; ++s) {
        const Code a = exhaustive ? static_cast<Code>(s % n) : pick(rng);
        const Code b = exhaustive ? static_cast<Code>((s / n) % n) : pick(rng);
        const Code c = exhaustive ? static_cast<Code>(s / (n * n)) : pick(rng);
        ASSERT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
        ASSERT_EQ(F.add(F.add(a, b), c), F.add(a, F.add(b, c)));
        ASSERT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
    }
}

TEST_P(TowerTest, NormIsMultiplicativeExhaustive) {
    const GaloisField& F = t->ext();
    const Code n = F.order();
    std::vector<Code> norm(n);
    for (Code a = 0; a < n; ++a) {
        norm[a] = t->rel_norm(a);
        ASSERT_TRUE(t->in_base(norm[a]));
    }
    for (Code a = 0; a < n; ++a)
        for (Code b = 0; b < n; ++b) ASSERT_EQ(norm[F.mul(a, b)], F.mul(norm[a], norm[b]));
}

TEST_P(TowerTest, FrobeniusHasOrderM) {
    for (Code a = 0; a < t->qm(); ++a) {
        Code x = a;
        for (unsigned i = 0; i < t->m(); ++i) x = t->frobenius(x, 1);
        ASSERT_EQ(x, a);
        ASSERT_EQ(t->frobenius(a, 1), t->ext().pow(a, t->q()));
    }
}

TEST_P(TowerTest, EmbeddingIsAHomomorphism) {
    const GaloisField& K = t->base();
    const GaloisField& F = t->ext();
    std::size_t fixed = 0;
    for (Code a = 0; a < t->qm(); ++a) fixed += t->frobenius(a, 1) == a;
    EXPECT_EQ(fixed, t->q());
    for (Code a = 0; a < K.order(); ++a) {
        ASSERT_EQ(t->restrict_to_base(t->embed(a)), a);
        for (Code b = 0; b < K.order(); ++b) {
            ASSERT_EQ(t->embed(K.add(a, b)), F.add(t->embed(a), t->embed(b)));
            ASSERT_EQ(t->embed(K.mul(a, b)), F.mul(t->embed(a), t->embed(b)));
        }
        ASSERT_EQ(t->frobenius(t->embed(a), 1), t->embed(a));
    }
}

TEST_P(TowerTest, CoordinatesRoundTripAndRankMatchesOracle) {
    for (Code a = 0; a < t->qm(); ++a) ASSERT_EQ(t->from_coordinates(t->coordinates(a)), a);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Code> pick(0, t->qm() - 1);
    const unsigned len = std::min(4U, t->m() + 1);
    for (int s = 0; s < 200; ++s) {
        std::vector<Code> v(len);
        for (auto& x : v) x = pick(rng);
        if (s % 3 == 0) v[1] = t->ext().mul(v[0], t->embed(1));  // force a dependency
        const unsigned r = oracle::fq_rank(*t, v);
        ASSERT_EQ(t->fq_rank(v), r);
        for (unsigned cap = 0; cap <= t->m(); ++cap) ASSERT_EQ(t->fq_rank_bounded(v, cap), std::min(r, cap));
    }
}

INSTANTIATE_TEST_SUITE_P(SmallTowers, TowerTest, ::testing::ValuesIn(kSmallTowers), tower_name);

TEST(GaloisField, RejectsBadParameters) {
    EXPECT_THROW(GaloisField(4, 2), InvalidParameter);
    EXPECT_THROW(GaloisField(2, std::vector<unsigned>{1, 0, 1}), InvalidParameter);  // x^2 + 1 over F_2
    EXPECT_THROW(FieldTower::for_q(6, 2), InvalidParameter);
    EXPECT_THROW(FieldTower::make(2, 1, 21), InvalidParameter);
}

TEST(GaloisField, DivisionByZeroThrows) {
    GaloisField F(3, 2);
    EXPECT_THROW(F.inv(0), DivisionByZero);
}

TEST(GaloisField, LargeFieldWithoutTables) {
    GaloisField F(2, 20);
    EXPECT_FALSE(F.uses_tables());
    const oracle::Field O(F);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Code> pick(1, F.order() - 1);
    for (int s = 0; s < 2000; ++s) {
        const Code a = pick(rng), b = pick(rng);
        ASSERT_EQ(F.mul(a, b), O.mul(a, b));
        ASSERT_EQ(F.mul(a, F.inv(a)), 1U);
    }
}

TEST(GaloisField, PrimitiveElementGeneratesTheGroup) {
    for (auto [p, d] : std::vector<std::pair<unsigned, unsigned>>{{2, 4}, {3, 3}, {5, 2}, {2, 8}}) {
        GaloisField F(p, d);
        std::set<Code> seen;
        Code x = 1;
        for (Code i = 0; i + 1 < F.order(); ++i) {
            seen.insert(x);
            x = F.mul(x, F.primitive_element());
        }
        EXPECT_EQ(seen.size(), F.order() - 1);
    }
}

TEST(FieldTower, JsonRoundTrip) {
    auto t = FieldTower::make(2, 2, 3);
    auto u = FieldTower::from_json(t->to_json());
    EXPECT_TRUE(t->same_as(*u));
}

TEST(FieldTower, ExplicitModuliAreHonoured) {
    // F_2 < F_16 with x^4 + x^3 + 1
    FieldTower t(2, 1, 4, {0, 1}, {1, 0, 0, 1, 1});
    EXPECT_EQ(t.ext().modulus(), (std::vector<unsigned>{1, 0, 0, 1, 1}));
    EXPECT_EQ(t.ext().mul(t.ext().x(), t.ext().pow(t.ext().x(), 3)), t.ext().add(t.ext().pow(t.ext().x(), 3), 1));
    EXPECT_THROW(FieldTower(2, 1, 4, {0, 1}, {1, 1, 1}), InvalidParameter);
}
