#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rmlkit/codes.hpp"
#include "rmlkit/geometry.hpp"

using namespace rmlkit;

namespace {

std::vector<QPolynomial> univariate(const PolyCode& C) {
    std::vector<QPolynomial> out;
    for (const auto& g : C.generators()) out.emplace_back(C.tower_ptr(), g.coeffs());
    return out;
}

/// Every F_{q^m}-combination of the generators, as q-polynomials.
std::vector<QPolynomial> all_words(const PolyCode& C) {
    const auto gens = univariate(C);
    std::vector<QPolynomial> out;
    for (const auto& c : oracle::all_vectors(gens.size(), C.tower().qm())) {
        QPolynomial f = QPolynomial::zero(C.tower_ptr());
        for (std::size_t i = 0; i < gens.size(); ++i) f = f + gens[i].scaled(c[i]);
        out.push_back(f);
    }
    return out;
}

}  // namespace

TEST(RankWeight, MatchesOracle) {
    auto t = FieldTower::for_q(3, 3);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<Code> pick(0, t->qm() - 1);
    for (int s = 0; s < 300; ++s) {
        std::vector<Code> v(1 + s % 4);
        for (auto& x : v) x = pick(rng);
        ASSERT_EQ(rank_weight(*t, v), oracle::fq_rank(*t, v));
    }
}

TEST(Gabidulin, MinimumDistanceMatchesOracleAndIsMrd) {
    for (auto [q, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {2, 4}, {3, 3}}) {
        auto t = FieldTower::for_q(q, m);
        for (unsigned k = 1; k <= 2; ++k)
            for (unsigned s = 1; s < m; ++s) {
                if (std::gcd(s, m) != 1) continue;
                const RankMetricCode C = gabidulin(t, k, s).to_vector_code();
                EXPECT_EQ(C.min_distance(), oracle::min_distance(*t, C.generator().basis()));
                EXPECT_EQ(C.min_distance(), m - k + 1);
                EXPECT_TRUE(is_mrd(C));
            }
    }
}

TEST(Gabidulin, LargerParametersAreMrd) {
    for (auto [q, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 5}, {3, 4}, {4, 3}})
        for (unsigned k = 1; k <= m; ++k) EXPECT_TRUE(is_mrd(gabidulin(FieldTower::for_q(q, m), k, 1))) << q << " " << m << " " << k;
}

TEST(Gabidulin, RequiresCoprimeShift) {
    auto t = FieldTower::for_q(2, 4);
    EXPECT_NO_THROW(gabidulin(t, 3, 3));
    EXPECT_THROW(gabidulin(t, 3, 2), InvalidParameter);
    EXPECT_THROW(gabidulin(t, 0, 1), InvalidParameter);
    EXPECT_THROW(gabidulin(t, 5, 1), InvalidParameter);
}

TEST(RankMetricCode, SingletonBoundOnEveryTwoDimensionalCode) {
    for (auto [q, m, n] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{2, 3, 3}, {2, 3, 2}, {3, 2, 2}, {2, 4, 3}}) {
        auto t = FieldTower::for_q(q, m);
        std::size_t checked = 0;
        SubspaceEnumerator(n, 2, t->qm()).for_each([&](const Matrix& G) {
            const RankMetricCode C(t, G);
            const unsigned d = C.min_distance();
            ASSERT_LE(d, n - 1);
            if (checked++ % 97 == 0) {
                ASSERT_EQ(d, oracle::min_distance(*t, G));
            }
        });
    }
}

TEST(RankMetricCode, WeightDistributionSumsToCodeSize) {
    auto t = FieldTower::for_q(2, 4);
    const RankMetricCode C = gabidulin(t, 2, 1).to_vector_code();
    const auto wd = C.weight_distribution();
    BigCount total = 0;
    for (const auto& x : wd) total += x;
    EXPECT_EQ(total, BigCount(256));
    EXPECT_EQ(wd[0], 1);
    EXPECT_EQ(wd[1], 0);
    EXPECT_EQ(wd[2], 0);
    EXPECT_EQ(C.weight_distribution_csv().substr(0, 14), "rank,count\n0,1");
}

TEST(RankMetricCode, PolyWordRanksMatchVectorWeights) {
    for (unsigned m = 2; m <= 4; ++m) {
        auto t = FieldTower::for_q(2, m);
        const PolyCode P = gabidulin(t, std::min(2U, m), 1);
        const auto B = default_evaluation_basis(*t, 1);
        std::vector<BigCount> from_poly(m + 1, 0);
        for (const auto& f : all_words(P)) {
            const auto v = evaluation_map(MultiQPolynomial(f), B);
            ASSERT_EQ(rank_weight(*t, v), poly_rank(f));
            from_poly[poly_rank(f)] += 1;
        }
        EXPECT_EQ(P.to_vector_code().weight_distribution(), from_poly);
    }
}

TEST(RankMetricCode, DistanceInvariantUnderRightComposition) {
    auto t = FieldTower::for_q(2, 4);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<Code> pick(0, t->qm() - 1);
    for (int s = 0; s < 30; ++s) {
        std::vector<QPolynomial> gens;
        for (int i = 0; i < 2; ++i) {
            std::vector<Code> c(4);
            for (auto& x : c) x = pick(rng);
            gens.emplace_back(t, c);
        }
        const PolyCode C = PolyCode::univariate(t, gens);
        const QPolynomial g = random_invertible(t, rng);
        std::vector<QPolynomial> moved;
        for (const auto& f : gens) moved.push_back(compose(f, g));
        const PolyCode D = PolyCode::univariate(t, moved);
        EXPECT_EQ(C.to_vector_code().weight_distribution(), D.to_vector_code().weight_distribution());
        EXPECT_EQ(C.to_vector_code().min_distance(), D.to_vector_code().min_distance());
    }
}

TEST(RankMetricCode, JsonRoundTrip) {
    auto t = FieldTower::for_q(3, 3);
    const RankMetricCode C = gabidulin(t, 2, 1).to_vector_code();
    const RankMetricCode D = RankMetricCode::from_json(C.to_json());
    EXPECT_EQ(D.generator(), C.generator());
    EXPECT_EQ(D.min_distance(), 2U);
}

TEST(RankMetricCode, MrdCheckRejectsLongCodes) {
    auto t = FieldTower::for_q(2, 2);
    EXPECT_THROW(is_mrd(one_weight_code(t, 2, t->ext().primitive_element())), UnsupportedShape);
}

TEST(MrdCodes, EveryTwoDimensionalMrdCodeAtQ2M4LooksLikeGabidulin) {
    auto t = FieldTower::for_q(2, 4);
    const RankMetricCode G = gabidulin(t, 2, 1).to_vector_code();
    const auto ref = G.weight_distribution();
    const unsigned ref_ideal = idealizer_dimension(G);
    EXPECT_EQ(ref_ideal, 4U);
    std::size_t count = 0;
    SubspaceEnumerator(4, 2, t->qm()).for_each([&](const Matrix& M) {
        const RankMetricCode C(t, M);
        if (!is_mrd(C)) return;
        ++count;
        ASSERT_EQ(C.weight_distribution(), ref);
        ASSERT_EQ(idealizer_dimension(C), ref_ideal);
    });
    EXPECT_EQ(count, 1344U);
}

TEST(TwistedGabidulin, EveryAdmissibleDeltaAtQ3M4IsMrd) {
    auto t = FieldTower::for_q(3, 4);
    for (auto variant : {TwistVariant::cz_form, TwistVariant::definition}) {
        int accepted = 0, rejected = 0;
        for (Code delta = 1; delta < t->qm(); ++delta) {
            if (t->rel_norm(delta) == 1) {
                EXPECT_THROW(twisted_gabidulin(t, 2, 1, delta, variant), InvalidDelta);
                ++rejected;
                continue;
            }
            const PolyCode C = twisted_gabidulin(t, 2, 1, delta, variant);
            const RankMetricCode V = C.to_vector_code();
            EXPECT_EQ(V.min_distance(), 3U);
            ++accepted;
        }
        EXPECT_EQ(accepted, 40);
        EXPECT_EQ(rejected, 40);
    }
}

TEST(TwistedGabidulin, EveryDeltaRejectedAtQ2) {
    auto t = FieldTower::for_q(2, 4);
    for (Code delta = 1; delta < t->qm(); ++delta) {
        EXPECT_EQ(t->rel_norm(delta), 1U);
        EXPECT_THROW(twisted_gabidulin(t, 2, 1, delta, TwistVariant::cz_form), InvalidDelta);
        EXPECT_THROW(twisted_gabidulin(t, 2, 1, delta, TwistVariant::definition), InvalidDelta);
    }
}

TEST(TwistedGabidulin, ShapeChecks) {
    auto t = FieldTower::for_q(3, 4);
    EXPECT_THROW(twisted_gabidulin(t, 3, 1, 2, TwistVariant::cz_form), InvalidParameter);
    EXPECT_THROW(twisted_gabidulin(t, 2, 2, 2, TwistVariant::definition), InvalidParameter);
    EXPECT_THROW(twisted_gabidulin(t, 2, 1, t->qm(), TwistVariant::definition), InvalidParameter);
}

TEST(OneWeight, EveryNonzeroWordHasFullRank) {
    for (auto [q, m, k] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 2, 3}}) {
        auto t = FieldTower::for_q(q, m);
        const RankMetricCode C = one_weight_code(t, k, t->ext().primitive_element());
        const auto wd = C.weight_distribution();
        for (unsigned w = 1; w < m; ++w) EXPECT_EQ(wd[w], 0);
        EXPECT_EQ(wd[m], ipow(BigInt(t->qm()), k) - 1);
        EXPECT_EQ(one_weight_poly_code(t, k).to_vector_code().weight_distribution(), wd);
    }
}

TEST(OneWeight, RejectsNonGeneratingAlpha) {
    auto t = FieldTower::for_q(2, 4);
    EXPECT_THROW(one_weight_code(t, 2, 1), NotPrimitiveElement);
    // an element of the subfield F_4 does not generate F_16 over F_2
    const Code sub = t->ext().pow(t->ext().primitive_element(), 5);
    EXPECT_THROW(one_weight_code(t, 2, sub), NotPrimitiveElement);
}

TEST(Support, DimensionOfSingleWordIsItsRank) {
    auto t = FieldTower::for_q(2, 3);
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<Code> pick(0, t->qm() - 1);
    for (int s = 0; s < 100; ++s) {
        std::vector<Code> v(4);
        for (auto& x : v) x = pick(rng);
        bool zero = true;
        for (Code x : v) zero = zero && x == 0;
        if (zero) continue;
        const Subspace X = Subspace::span(Matrix::from_rows({v}), t->ext());
        EXPECT_EQ(support(*t, X).dim(), rank_weight(*t, v));
    }
}

TEST(Automorphisms, GabidulinLineAtQ2M3) {
    auto t = FieldTower::for_q(2, 3);
    EXPECT_EQ(linear_automorphism_count(gabidulin(t, 1, 1), AutMode::exhaustive), 7);
}

TEST(Automorphisms, GabidulinPlaneAtQ2M4) {
    auto t = FieldTower::for_q(2, 4);
    EXPECT_EQ(linear_automorphism_count(gabidulin(t, 2, 1), AutMode::exhaustive), 15);
}

TEST(Automorphisms, OneWeightCodeAtQ2M2K2) {
    auto t = FieldTower::for_q(2, 2);
    EXPECT_EQ(linear_automorphism_count(one_weight_poly_code(t, 2), AutMode::exhaustive), 180);
    EXPECT_EQ(linear_automorphism_count(one_weight_code(t, 2, t->ext().primitive_element())), 180);
}

TEST(Automorphisms, TwistedCodeMonomialCountAtQ3M4) {
    auto t = FieldTower::for_q(3, 4);
    for (Code delta = 1; delta < t->qm(); ++delta) {
        if (t->rel_norm(delta) == 1) continue;
        const PolyCode C = twisted_gabidulin(t, 2, 1, delta, TwistVariant::cz_form);
        EXPECT_EQ(linear_automorphism_count(C, AutMode::monomial), 8) << "delta=" << delta;
        EXPECT_EQ(idealizer_dimension(C.to_vector_code()), 2U);
    }
}

TEST(Automorphisms, GroupSweepBudget) {
    auto t = FieldTower::for_q(3, 4);
    EXPECT_THROW(linear_automorphism_count(gabidulin(t, 2, 1), AutMode::exhaustive), ResourceBudgetExceeded);
}
