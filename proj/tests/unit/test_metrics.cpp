#include "oracles.hpp"

#include "wealthnet/errors.hpp"
#include "wealthnet/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wealthnet;
namespace t = wealthnet::testing;

TEST(Gini, HandValues) {
    EXPECT_EQ(gini(std::vector<double>(10, 7.0)), 0.0);
    std::vector<double> one(10, 0.0);
    one[3] = 50.0;
    EXPECT_NEAR(gini(one), 1.0, 1e-15);
    EXPECT_NEAR(gini(std::vector<double>{1, 2, 3}), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(t::gini_pairwise({1, 2, 3}), 1.0 / 3.0, 1e-15);
}

TEST(Gini, MatchesPairwiseOracle) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 199;
        const auto x = t::random_wealth(rng, n);
        EXPECT_NEAR(gini(x), t::gini_pairwise(x), 1e-12) << n;
    }
}

TEST(Gini, ScaleAndPermutationInvariant) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = t::random_wealth(rng, 150);
        const double g = gini(x);
        auto scaled = x;
        for (auto& v : scaled) v *= 3.7;
        EXPECT_NEAR(gini(scaled), g, 1e-13);
        std::shuffle(x.begin(), x.end(), rng);
        EXPECT_NEAR(gini(x), g, 1e-13);
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 1.0);
    }
}

TEST(Gini, Errors) {
    EXPECT_THROW(gini(std::vector<double>{5.0}), MetricError);
    EXPECT_THROW(gini(std::vector<double>{0.0, 0.0}), MetricError);
    EXPECT_THROW(gini(std::vector<double>{-1.0, 3.0}), MetricError);
}

TEST(ClassFractions, Percentages) {
    const auto all = class_fractions(std::vector<double>(10, 0.55));
    EXPECT_EQ(all[0], 100.0);
    EXPECT_EQ(all[1], 0.0);
    std::mt19937_64 rng(2);
    const auto u = class_fractions(t::random_attitudes(rng, 100000));
    EXPECT_NEAR(u[0], 34.0, 0.8);
    EXPECT_NEAR(u[1], 32.0, 0.8);
    EXPECT_NEAR(u[2], 34.0, 0.8);
    EXPECT_NEAR(u[0] + u[1] + u[2], 100.0, 1e-9);
}

TEST(ClassWealth, SumsByClass) {
    const auto w = class_wealth(std::vector<double>{1, 2, 4, 8}, std::vector<double>{0.5, 0.7, 0.9, 0.6});
    EXPECT_EQ(w[0], 9.0);
    EXPECT_EQ(w[1], 2.0);
    EXPECT_EQ(w[2], 4.0);
}

TEST(MeanCi, ConstantSamples) {
    const auto ci = mean_ci(std::vector<double>(20, 3.25));
    EXPECT_EQ(ci.mean, 3.25);
    EXPECT_EQ(ci.lo, 3.25);
    EXPECT_EQ(ci.hi, 3.25);
}

TEST(MeanCi, TwoSamplesUseCauchyQuantile) {
    const auto ci = mean_ci(std::vector<double>{0.0, 1.0});
    const double half = t::t_quantile_one_dof(0.975) * std::sqrt(0.5) / std::sqrt(2.0);
    EXPECT_DOUBLE_EQ(ci.mean, 0.5);
    EXPECT_NEAR(ci.lo, 0.5 - half, 1e-10);
    EXPECT_NEAR(ci.hi, 0.5 + half, 1e-10);
    EXPECT_NEAR(half, 6.3531, 1e-3);
}

TEST(MeanCi, LargeSampleWidth) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    std::vector<double> x(1000);
    for (auto& v : x) v = z(rng);
    const auto ci = mean_ci(x);
    EXPECT_NEAR(ci.hi - ci.lo, 2 * 1.96 / std::sqrt(1000.0), 0.012);
    EXPECT_LE(ci.lo, ci.mean);
    EXPECT_LE(ci.mean, ci.hi);
    EXPECT_THROW(mean_ci(std::vector<double>{1.0}), MetricError);
}

TEST(Summarize, SkipsMissingValues) {
    const double nan = std::nan("");
    const auto ci = summarize(std::vector<double>{1.0, nan, 3.0});
    EXPECT_EQ(ci.mean, 2.0);
    const auto single = summarize(std::vector<double>{nan, 4.0});
    EXPECT_EQ(single.mean, 4.0);
    EXPECT_TRUE(std::isnan(single.lo));
    EXPECT_TRUE(std::isnan(summarize(std::vector<double>{nan}).mean));
}

TEST(CommunityStats, RatiosCountsAndFractions) {
    const std::vector<double> wealth{300, 100, 50, 50, 0, 100};
    const std::vector<double> alpha{0.55, 0.6, 0.7, 0.9, 0.6, 0.95};
    std::vector<Community> cs(3);
    for (int c = 0; c < 3; ++c) cs[c].id = c + 1;
    cs[0].leaders = {0};
    cs[0].followers = {1, 2, 4};
    cs[2].leaders = {5};
    cs[2].followers = {3};
    const auto t = community_stats(wealth, alpha, cs, 100.0);
    EXPECT_DOUBLE_EQ(t.communities[0].wealth_ratio, 1.125);
    EXPECT_EQ(t.communities[0].members, 4u);
    EXPECT_DOUBLE_EQ(t.communities[0].fractions[0], 75.0);
    EXPECT_DOUBLE_EQ(t.communities[0].fractions[1], 25.0);
    EXPECT_EQ(t.communities[1].members, 0u);
    EXPECT_TRUE(std::isnan(t.communities[1].wealth_ratio));
    EXPECT_TRUE(std::isnan(t.communities[1].fractions[0]));
    EXPECT_DOUBLE_EQ(t.leaders[0].wealth_ratio, 3.0);
    EXPECT_EQ(t.leaders[0].count, 1u);
    EXPECT_EQ(t.leaders[1].count, 0u);
    EXPECT_DOUBLE_EQ(t.communities[2].wealth_ratio, 0.75);

    const auto means = community_means(wealth, cs);
    EXPECT_DOUBLE_EQ(means[0], 112.5);
    EXPECT_TRUE(std::isnan(means[1]));
}

TEST(CommunityStats, WholePopulationUnderConservation) {
    const std::vector<double> wealth{150, 50, 120, 80};
    const std::vector<double> alpha{0.6, 0.7, 0.8, 0.9};
    std::vector<Community> cs(3);
    for (int c = 0; c < 3; ++c) cs[c].id = c + 1;
    cs[1].leaders = {0};
    cs[1].followers = {1, 2, 3};
    EXPECT_DOUBLE_EQ(community_stats(wealth, alpha, cs, 100.0).communities[1].wealth_ratio, 1.0);
}

TEST(Series, MovingAverageAndTailMean) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    EXPECT_EQ(moving_average(x, 2), (std::vector<double>{1, 1.5, 2.5, 3.5, 4.5}));
    EXPECT_EQ(moving_average(x, 1), x);
    EXPECT_EQ(tail_mean(x, 2), 4.5);
    EXPECT_EQ(tail_mean(x, 10), 3.0);
    EXPECT_THROW(moving_average(x, 0), MetricError);
}

TEST(Series, SteadyStateIndex) {
    std::vector<double> x(400);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 1.0 - std::exp(-static_cast<double>(k) / 30.0);
    const auto idx = steady_state_index(x, 50);
    ASSERT_TRUE(idx.has_value());
    // Brute force: the first k whose trailing mean moved < 0.5% over one window.
    auto mean = [&](std::size_t end) {
        double s = 0;
        for (std::size_t i = end - 50; i < end; ++i) s += x[i];
        return s / 50;
    };
    std::size_t expected = 0;
    for (std::size_t k = 100; k <= x.size(); ++k) {
        const double now = mean(k);
        const double before = mean(k - 50);
        if (std::fabs(now - before) < 0.005 * std::fabs(before)) {
            expected = k - 1;
            break;
        }
    }
    EXPECT_EQ(*idx, expected);
    EXPECT_FALSE(steady_state_index(std::vector<double>(40, 1.0), 50).has_value());
}

TEST(StepMetrics, IdenticalTreatsNanBitwise) {
    StepMetrics a;
    a.community_mean.fill(std::nan(""));
    StepMetrics b = a;
    EXPECT_TRUE(identical(a, b));
    b.gini = 1e-300;
    EXPECT_FALSE(identical(a, b));
}
