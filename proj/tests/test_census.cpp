#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "rmlkit/census.hpp"

using namespace rmlkit;

TEST(Arithmetic, EulerPhiAndGroupOrders) {
    EXPECT_EQ(euler_phi(4), 2U);
    EXPECT_EQ(euler_phi(6), 2U);
    EXPECT_EQ(euler_phi(7), 6U);
    EXPECT_EQ(gl_order(4, 2), 20160);
    EXPECT_EQ(gl_order(3, 2), 168);
    EXPECT_EQ(gaussian_binomial(4, 2, 16), 70161);
    EXPECT_EQ(gaussian_binomial(3, 2, 8), 73);
    EXPECT_EQ(gaussian_binomial(4, 2, 4), 357);
}

TEST(MrdFormulas, ThreeIndependentPathsAgreeAtQ2M4) {
    EXPECT_EQ(mrd_count_q2_family(4), 1344);
    EXPECT_EQ(mrd_count_m4_family(2), 1344);
    EXPECT_EQ(mrd_count_m4_orbit_stabilizer(2), 1344);
    const CensusResult r = count_mrd_exhaustive(2, 4);
    ASSERT_TRUE(r.exhaustive_count.has_value());
    EXPECT_EQ(*r.exhaustive_count, 1344);
    EXPECT_TRUE(r.match());
    EXPECT_EQ(r.subspaces, 70161U);
    EXPECT_EQ(r.idealizer_classes, (std::map<unsigned, std::uint64_t>{{4, 1344}}));
}

TEST(MrdFormulas, ValuesAtOtherParameters) {
    EXPECT_EQ(mrd_count_m4_family(3), 6368544);
    EXPECT_EQ(mrd_count_m4_orbit_stabilizer(3), 6368544);
    EXPECT_EQ(mrd_count_q2_family(3), 24);
    for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16}) EXPECT_EQ(mrd_count_m4_family(q), mrd_count_m4_orbit_stabilizer(q)) << q;
    EXPECT_THROW(mrd_count_formulas(3, 3), UnsupportedShape);
    EXPECT_THROW(mrd_count_m4_family(6), UnsupportedShape);
}

TEST(MrdCensus, ExhaustiveMatchesFormulaAtQ2M3) {
    const CensusResult r = count_mrd_exhaustive(2, 3);
    EXPECT_EQ(*r.exhaustive_count, 24);
    EXPECT_EQ(r.subspaces, 73U);
    EXPECT_TRUE(r.match());
}

TEST(MrdCensus, MatchesBruteForceDistanceOracleAtQ2M3) {
    auto t = FieldTower::for_q(2, 3);
    std::size_t count = 0;
    SubspaceEnumerator(3, 2, 8).for_each([&](const Matrix& G) { count += oracle::min_distance(*t, G) == 2; });
    EXPECT_EQ(count, 24U);
}

TEST(MrdCensus, DeterministicAcrossShardsAndThreads) {
    const CensusResult ref = count_mrd_exhaustive(2, 4);
    for (auto [threads, block] : std::vector<std::pair<unsigned, std::uint64_t>>{{1, 1000}, {3, 4096}, {4, 777}, {2, 100000}}) {
        CensusOptions o;
        o.threads = threads;
        o.shard_block = block;
        const CensusResult r = count_mrd_exhaustive(2, 4, o);
        EXPECT_EQ(r.exhaustive_count, ref.exhaustive_count);
        EXPECT_EQ(r.subspaces, ref.subspaces);
        EXPECT_EQ(r.idealizer_classes, ref.idealizer_classes);
        EXPECT_EQ(r.density->exact, ref.density->exact);
    }
}

TEST(MrdCensus, ResumesFromCheckpoint) {
    const auto dir = std::filesystem::temp_directory_path() / "rmlkit_census_ckpt";
    std::filesystem::remove_all(dir);
    CensusOptions o;
    o.shard_block = 1000;
    o.checkpoint_dir = dir;
    o.checkpoint_every = 3;
    o.stop_after_shards = 20;
    const CensusResult partial = count_mrd_exhaustive(2, 4, o);
    EXPECT_FALSE(partial.trace.complete);
    EXPECT_FALSE(partial.exhaustive_count.has_value());
    EXPECT_EQ(partial.trace.shards_done, 20U);

    o.stop_after_shards = 0;
    o.threads = 2;
    const CensusResult full = count_mrd_exhaustive(2, 4, o);
    EXPECT_TRUE(full.trace.complete);
    EXPECT_EQ(full.trace.shards_resumed, 20U);
    EXPECT_EQ(*full.exhaustive_count, 1344);
    EXPECT_EQ(full.subspaces, 70161U);

    // a checkpoint written for other parameters is refused
    CensusOptions other = o;
    other.shard_block = 999;
    std::filesystem::copy_file(dir / "census_mrd_q2_m4_k2.json", dir / "tmp.json");
    EXPECT_THROW(count_mrd_exhaustive(2, 4, other), FormatError);
    std::filesystem::remove_all(dir);
}

TEST(MrdCensus, HeavyRunNeedsFlag) {
    EXPECT_THROW(count_mrd_exhaustive(3, 4), ResourceBudgetExceeded);
    CensusOptions heavy;
    heavy.heavy = true;
    EXPECT_THROW(count_mrd_exhaustive(2, 9, heavy), ResourceBudgetExceeded);
}

TEST(MrdCensus, ResultJsonShape) {
    const nlohmann::json j = count_mrd_exhaustive(2, 3).to_json();
    for (const char* key : {"parameters", "exhaustive_count", "formula_value", "match", "density", "method",
                            "elapsed_seconds", "shard_trace", "subspaces"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.at("exhaustive_count"), "24");
    EXPECT_EQ(j.at("density").at("exact"), "24/73");
}

TEST(OneWeightCensus, ExhaustiveAgreesWithFormula) {
    const CensusResult r = count_one_weight(2, 2, 2, CountMode::exhaustive);
    EXPECT_EQ(*r.exhaustive_count, 112);
    EXPECT_EQ(*r.formula_value, 112);
    EXPECT_EQ(r.subspaces, 357U);
    EXPECT_TRUE(r.match());
    EXPECT_EQ(r.weight_distributions_identical, true);

    const CensusResult k1 = count_one_weight(3, 1, 2, CountMode::exhaustive);
    EXPECT_EQ(*k1.exhaustive_count, 24);
    EXPECT_TRUE(k1.match());

    const CensusResult q3 = count_one_weight(2, 2, 3, CountMode::exhaustive);
    EXPECT_TRUE(q3.match());
    EXPECT_EQ(q3.weight_distributions_identical, true);
}

TEST(OneWeightCensus, FormulaSpecialisations) {
    for (unsigned m = 1; m <= 5; ++m)
        for (std::uint64_t q : {2, 3, 4}) EXPECT_EQ(one_weight_count_formula(m, 1, q), gl_order(m, q) / (ipow(BigInt(q), m) - 1));
    const CensusResult r = count_one_weight(2, 2, 2, CountMode::formula);
    EXPECT_FALSE(r.exhaustive_count.has_value());
    EXPECT_EQ(r.density->exact, Rational(112, 357));
}

TEST(Density, ThreeWaysAtQ2) {
    const Rational expected(1344, 70161);
    EXPECT_EQ(count_mrd_exhaustive(2, 4).density->exact, expected);
    EXPECT_EQ(make_density(mrd_count_m4_family(2), 4, 2, 2, 4).exact, expected);
    EXPECT_EQ(printed_density_m4(2), expected);
    EXPECT_EQ(printed_density_m4(2), Rational(5140800, 268365825));
}

TEST(Density, PrintedM4FormMatchesCountsForAllQ) {
    for (std::uint64_t q : {3, 4, 5, 7, 8, 9, 16}) EXPECT_EQ(printed_density_m4(q), make_density(mrd_count_m4_family(q), 4, 2, q, 4).exact);
}

TEST(Density, PrintedOneWeightFormMatchesCounts) {
    for (auto [m, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 3}, {4, 1}})
        for (std::uint64_t q : {2, 3, 4})
            EXPECT_EQ(printed_density_one_weight(m, k, q), make_density(one_weight_count_formula(m, k, q), m * k, k, q, m).exact);
}

TEST(Density, PrintedQ2FormIsTwiceTheCount) {
    // the q = 2 closed density carries an extra factor 2 against count / binomial
    for (unsigned m = 3; m <= 8; ++m)
        EXPECT_EQ(printed_density_q2(m), 2 * make_density(mrd_count_q2_family(m), m, 2, 2, m).exact) << "m=" << m;
}

TEST(Density, DegreeChecksGiveLimits) {
    const LimitCheck m4 = m4_density_limit();
    EXPECT_EQ(m4.numerator_degree, 28);
    EXPECT_EQ(m4.denominator_degree, 28);
    EXPECT_EQ(m4.limit, Rational(1, 2));
    for (auto [m, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 3}, {4, 2}}) {
        const LimitCheck c = one_weight_density_limit(m, k);
        EXPECT_TRUE(c.degrees_equal());
        EXPECT_EQ(c.numerator_degree, static_cast<int>(m * m * k * k));
        EXPECT_EQ(c.limit, 1);
    }
}

TEST(Density, PolynomialHelpersMatchIntegerVersions) {
    for (std::uint64_t q : {2, 3, 5}) {
        EXPECT_EQ(gl_order_poly(4).evaluate(q), gl_order(4, q));
        EXPECT_EQ(gaussian_binomial_poly(4, 2, 3).evaluate(q), gaussian_binomial(4, 2, ipow(BigInt(q), 3)));
    }
}

TEST(Density, FullDimensionHasDensityOne) {
    for (unsigned n = 1; n <= 4; ++n) EXPECT_EQ(make_density(1, n, n, 2, 3).exact, 1);
}

TEST(AsymptoticReport, Q2Family) {
    const nlohmann::json r = asymptotic_report(DensityFamily::q2_mrd, 3, 8);
    ASSERT_EQ(r.at("rows").size(), 6U);
    for (const auto& row : r.at("rows")) {
        EXPECT_EQ(row.at("printed_over_exact"), "2");
        EXPECT_LT(std::stod(row.at("envelope_ratio").get<std::string>()), 1.0);
    }
}

TEST(AsymptoticReport, M4FamilyIncreasesTowardOneHalf) {
    const nlohmann::json r = asymptotic_report(DensityFamily::m4_mrd, 2, 16);
    EXPECT_EQ(r.at("density_monotone_increasing"), true);
    EXPECT_EQ(r.at("limit_check").at("limit"), "1/2");
    EXPECT_EQ(r.at("rows").size(), 10U);
    for (const auto& row : r.at("rows")) {
        EXPECT_EQ(row.at("printed_matches"), true);
        EXPECT_LT(std::stod(row.at("density").at("decimal").get<std::string>()), 0.5);
    }
}

TEST(AsymptoticReport, OneWeightFamily) {
    const nlohmann::json r = asymptotic_report(DensityFamily::one_weight, 2, 9, 2, 2);
    EXPECT_EQ(r.at("limit_check").at("limit"), "1");
    EXPECT_EQ(r.at("density_monotone_increasing"), true);
    EXPECT_THROW(parse_density_family("nope"), InvalidParameter);
}
