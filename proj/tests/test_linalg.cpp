#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "oracles.hpp"
#include "rmlkit/linalg.hpp"

using namespace rmlkit;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Code Q, std::mt19937_64& rng) {
    std::uniform_int_distribution<Code> pick(0, Q - 1);
    Matrix M(r, c);
    for (auto& x : M.data) x = pick(rng);
    return M;
}

/// Rank by counting distinct row combinations.
std::size_t oracle_rank(const Matrix& M, const GaloisField& F) {
    std::set<std::vector<Code>> span;
    for (const auto& c : oracle::all_vectors(M.rows, F.order())) {
        std::vector<Code> w(M.cols, 0);
        for (std::size_t r = 0; r < M.rows; ++r)
            for (std::size_t j = 0; j < M.cols; ++j) w[j] = F.add(w[j], F.mul(c[r], M(r, j)));
        span.insert(w);
    }
    std::size_t r = 0;
    for (std::size_t n = 1; n < span.size(); n *= F.order()) ++r;
    return r;
}

}  // namespace

TEST(Rref, IdempotentAndRankMatchesOracle) {
    std::mt19937_64 rng(1);
    for (auto [p, d] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        GaloisField F(p, d);
        for (int s = 0; s < 60; ++s) {
            Matrix M = random_matrix(1 + s % 4, 2 + s % 4, F.order(), rng);
            if (s % 5 == 0 && M.rows > 1) std::copy(M.row(0).begin(), M.row(0).end(), M.row(1).begin());
            const Matrix R = rref(M, F);
            EXPECT_EQ(rref(R, F).data, R.data);
            EXPECT_EQ(rank(M, F), oracle_rank(M, F));
        }
    }
}

TEST(SubspaceEnumerator, CountsMatchGaussianBinomialAndAreDistinct) {
    for (Code Q : {2U, 3U, 4U})
        for (std::size_t n = 0; n <= 5; ++n) {
            if (Q == 4 && n == 5) continue;  // [5,2]_4 = 11253 is fine but [5,*] over F_4 adds little
            GaloisField F = Q == 4 ? GaloisField(2, 2) : GaloisField(Q, 1);
            for (std::size_t k = 0; k <= n; ++k) {
                SubspaceEnumerator en(n, k, Q);
                std::unordered_set<Subspace, SubspaceHash> seen;
                en.for_each([&](const Matrix& M) {
                    EXPECT_EQ(rref(M, F).data, M.data);
                    EXPECT_EQ(rank(M, F), k);
                    seen.insert(Subspace::from_rref(M, Q));
                });
                const BigCount expect = oracle::gaussian_binomial(static_cast<int>(n), static_cast<int>(k), Q);
                EXPECT_EQ(BigCount(seen.size()), expect) << "n=" << n << " k=" << k << " Q=" << Q;
                EXPECT_EQ(BigCount(en.total()), expect);
                EXPECT_EQ(gaussian_binomial(n, k, Q), expect);
            }
        }
}

TEST(SubspaceEnumerator, ShardsPartitionTheEnumeration) {
    SubspaceEnumerator en(4, 2, 3);
    std::vector<Matrix> all = en.collect();
    for (std::uint64_t block : {1ULL, 7ULL, 100ULL, 100000ULL}) {
        std::vector<Matrix> pieces;
        for (const Shard& s : en.shards(block)) en.for_each_in(s, [&](const Matrix& M) { pieces.push_back(M); });
        ASSERT_EQ(pieces.size(), all.size());
        for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(pieces[i].data, all[i].data);
    }
}

TEST(SubspaceLattice, JoinMeetLawsExhaustiveInF2Cubed) {
    GaloisField F(2, 1);
    std::vector<Subspace> all;
    for (std::size_t k = 0; k <= 3; ++k) SubspaceEnumerator(3, k, 2).for_each([&](const Matrix& M) { all.push_back(Subspace::from_rref(M, 2)); });
    ASSERT_EQ(all.size(), 16U);
    for (const auto& A : all)
        for (const auto& B : all) {
            const Subspace J = join(A, B, F), M = meet(A, B, F);
            EXPECT_EQ(J.dim() + M.dim(), A.dim() + B.dim());
            EXPECT_EQ(join(A, M, F), A);  // absorption
            EXPECT_EQ(meet(A, J, F), A);
            EXPECT_TRUE(J.contains(A, F) && J.contains(B, F));
            EXPECT_TRUE(A.contains(M, F) && B.contains(M, F));
            for (const auto& C : all) {
                EXPECT_EQ(join(join(A, B, F), C, F), join(A, join(B, C, F), F));
                EXPECT_EQ(meet(meet(A, B, F), C, F), meet(A, meet(B, C, F), F));
            }
        }
}

TEST(Subspace, TextRoundTrip) {
    GaloisField F(3, 1);
    Subspace S = Subspace::span(Matrix::from_rows({{1, 2, 0, 1}, {2, 1, 1, 0}}), F);
    EXPECT_EQ(subspace_from_text(to_text(S), F), S);
}

TEST(Subspace, MismatchedAmbientThrows) {
    GaloisField F(2, 1);
    EXPECT_THROW(join(Subspace::full(2, F), Subspace::full(3, F), F), DimensionMismatch);
}

TEST(Matrix, MultiplyMatchesDefinition) {
    GaloisField F(2, 3);
    std::mt19937_64 rng(2);
    Matrix A = random_matrix(3, 4, 8, rng), B = random_matrix(4, 2, 8, rng);
    Matrix C = multiply(A, B, F);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            Code s = 0;
            for (std::size_t k = 0; k < 4; ++k) s = F.add(s, F.mul(A(i, k), B(k, j)));
            EXPECT_EQ(C(i, j), s);
        }
    EXPECT_THROW(multiply(A, A, F), DimensionMismatch);
}
