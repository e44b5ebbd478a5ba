#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rmlkit/qpoly.hpp"

using namespace rmlkit;

namespace {

QPolynomial random_poly(const TowerPtr& t, std::mt19937_64& rng) {
    std::uniform_int_distribution<Code> pick(0, t->qm() - 1);
    std::vector<Code> c(t->m());
    for (auto& x : c) x = pick(rng);
    return {t, std::move(c)};
}

}  // namespace

TEST(QPolynomial, CompositionAgreesWithEvaluation) {
    for (auto [q, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {2, 4}, {3, 3}, {4, 2}}) {
        auto t = FieldTower::for_q(q, m);
        std::mt19937_64 rng(q * 31 + m);
        for (int s = 0; s < 40; ++s) {
            const QPolynomial f = random_poly(t, rng), g = random_poly(t, rng);
            const QPolynomial fg = compose(f, g);
            for (Code x = 0; x < t->qm(); ++x) ASSERT_EQ(fg(x), f(g(x)));
        }
    }
}

TEST(QPolynomial, EvaluationIsFqLinear) {
    auto t = FieldTower::for_q(3, 3);
    std::mt19937_64 rng(4);
    const GaloisField& F = t->ext();
    for (int s = 0; s < 20; ++s) {
        const QPolynomial f = random_poly(t, rng);
        for (Code x = 0; x < t->qm(); x += 5)
            for (Code y = 0; y < t->qm(); y += 7) {
                ASSERT_EQ(f(F.add(x, y)), F.add(f(x), f(y)));
                for (Code c = 0; c < t->q(); ++c) ASSERT_EQ(f(F.mul(t->embed(c), x)), F.mul(t->embed(c), f(x)));
            }
    }
}

TEST(QPolynomial, RankMatchesKernelOracle) {
    for (auto [q, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 4}, {3, 3}, {4, 2}}) {
        auto t = FieldTower::for_q(q, m);
        std::mt19937_64 rng(9);
        for (int s = 0; s < 60; ++s) {
            QPolynomial f = random_poly(t, rng);
            if (s % 3 == 0) f = compose(f, QPolynomial::trace(t));  // rank <= 1
            ASSERT_EQ(poly_rank(f), oracle::poly_rank(f));
            ASSERT_EQ(is_invertible(f), oracle::poly_rank(f) == m);
        }
        EXPECT_EQ(poly_rank(QPolynomial::identity(t)), m);
        EXPECT_EQ(poly_rank(QPolynomial::trace(t)), 1U);
        EXPECT_EQ(poly_rank(QPolynomial::zero(t)), 0U);
    }
}

TEST(QPolynomial, MatrixMapIsARingHomomorphism) {
    auto t = FieldTower::for_q(2, 4);
    const GaloisField& K = t->base();
    std::mt19937_64 rng(12);
    for (int s = 0; s < 40; ++s) {
        const QPolynomial f = random_poly(t, rng), g = random_poly(t, rng);
        const Matrix Mf = to_matrix(f), Mg = to_matrix(g);
        Matrix sum = Mf;
        for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] = K.add(Mf.data[i], Mg.data[i]);
        EXPECT_EQ(to_matrix(f + g).data, sum.data);
        const Matrix a = to_matrix(compose(f, g));
        EXPECT_EQ(a.data, multiply(Mf, Mg, K).data);  // columns are images, so f o g maps to Mf Mg
        EXPECT_EQ(rank(Mf, K), poly_rank(f));
        EXPECT_LE(poly_rank(compose(f, g)), std::min(poly_rank(f), poly_rank(g)));
    }
}

TEST(QPolynomial, InterpolationRoundTrip) {
    auto t = FieldTower::for_q(3, 3);
    std::mt19937_64 rng(8);
    for (int s = 0; s < 30; ++s) {
        const QPolynomial f = random_poly(t, rng);
        std::vector<Code> img;
        for (Code b : t->polynomial_basis()) img.push_back(f(b));
        EXPECT_EQ(QPolynomial::interpolate(t, img), f);
    }
}

TEST(QPolynomial, ParseAndPrintRoundTrip) {
    auto t = FieldTower::for_q(2, 4);
    const QPolynomial f(t, {3, 0, 7, 1});
    EXPECT_EQ(QPolynomial::parse(t, f.to_string()), f);
    EXPECT_EQ(QPolynomial::from_json(t, f.to_json()), f);
    EXPECT_THROW(QPolynomial(t, {1, 2}), DimensionMismatch);
}

TEST(QPolynomial, RankDistanceIsAMetric) {
    auto t = FieldTower::for_q(2, 3);
    std::mt19937_64 rng(21);
    for (int s = 0; s < 500; ++s) {
        const QPolynomial f = random_poly(t, rng), g = random_poly(t, rng), h = random_poly(t, rng);
        EXPECT_EQ(rank_distance(f, f), 0U);
        EXPECT_EQ(rank_distance(f, g), rank_distance(g, f));
        EXPECT_LE(rank_distance(f, h), rank_distance(f, g) + rank_distance(g, h));
        if (!(f == g)) {
            EXPECT_GT(rank_distance(f, g), 0U);
        }
    }
}

TEST(QPolynomial, SemilinearTwistActsOnCoefficients) {
    auto t = FieldTower::for_q(4, 2);  // F_4 < F_16, p = 2, total degree 4
    std::mt19937_64 rng(5);
    const QPolynomial f = random_poly(t, rng);
    const QPolynomial g = semilinear_twist(f, 1);
    for (unsigned i = 0; i < t->m(); ++i) EXPECT_EQ(g.coeff(i), t->ext().pow(f.coeff(i), 2));
    EXPECT_EQ(semilinear_twist(f, 4), f);
    EXPECT_EQ(poly_rank(g), poly_rank(f));
}

TEST(MultiQPolynomial, EvaluationMapIsInjectiveExhaustive) {
    // q = 2, m = 2, l = 2: all 4^4 = 256 polynomials sum_v sum_j c_{v,j} x_v^{q^j}
    auto t = FieldTower::for_q(2, 2);
    const auto B = default_evaluation_basis(*t, 2);
    std::set<std::vector<Code>> images;
    for (const auto& c : oracle::all_vectors(4, t->qm())) {
        const MultiQPolynomial f(t, 2, c);
        const auto e = evaluation_map(f, B);
        bool zero = true;
        for (Code x : e) zero = zero && x == 0;
        EXPECT_EQ(zero, f == MultiQPolynomial::zero(t, 2));
        images.insert(e);
    }
    EXPECT_EQ(images.size(), 256U);
}

TEST(MultiQPolynomial, CompositionAgreesWithEvaluation) {
    auto t = FieldTower::for_q(2, 3);
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<Code> pick(0, t->qm() - 1);
    auto rnd = [&](unsigned ell) {
        std::vector<Code> c(static_cast<std::size_t>(ell) * t->m());
        for (auto& x : c) x = pick(rng);
        return MultiQPolynomial(t, ell, c);
    };
    for (int s = 0; s < 20; ++s) {
        const MultiQPolynomial f = rnd(2);
        const std::vector<MultiQPolynomial> g = {rnd(3), rnd(3)};
        const MultiQPolynomial fg = compose(f, g);
        for (int r = 0; r < 50; ++r) {
            const std::vector<Code> a = {pick(rng), pick(rng), pick(rng)};
            const std::vector<Code> ga = {g[0](a), g[1](a)};
            ASSERT_EQ(fg(a), f(ga));
        }
    }
}

TEST(MultiQPolynomial, DependentEvaluationBasisRejected) {
    auto t = FieldTower::for_q(2, 2);
    auto B = default_evaluation_basis(*t, 2);
    B[1] = B[0];
    EXPECT_THROW(check_evaluation_basis(*t, 2, B), DependentBasis);
}
