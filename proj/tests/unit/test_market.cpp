#include "oracles.hpp"

#include "wealthnet/errors.hpp"
#include "wealthnet/market.hpp"
#include "wealthnet/metrics.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace wealthnet;
namespace t = wealthnet::testing;

namespace {

std::vector<AgentState> population(const std::vector<double>& alphas, double wealth = 100.0) {
    std::vector<AgentState> out;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        out.push_back(AgentState::make(j, wealth, RiskAttitude(alphas[j]), {}));
    }
    return out;
}

std::vector<AgentState> random_population(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return population(t::random_attitudes(rng, n));
}

}  // namespace

TEST(Availability, FractionOfTotal) {
    const MarketParams p;
    const auto pool = reset_availability(100000.0, p);
    ASSERT_EQ(pool.real_assets(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(pool.capacity(i), 6666.6666666667, 1e-9);
    EXPECT_DOUBLE_EQ(reset_availability(15.0, p).capacity(2), 1.0);
    EXPECT_EQ(reset_availability(0.0, p).capacity(0), 0.0);
    EXPECT_THROW(reset_availability(-1.0, p), DomainError);
}

TEST(SettleTrade, HandValues) {
    const MarketParams p;
    EXPECT_NEAR(settle_trade(100.0, p.assets[0], 1, 0.2), 110.6, 1e-12);
    EXPECT_NEAR(settle_trade(100.0, p.assets[0], 0, 0.2), 92.0, 1e-12);
    EXPECT_EQ(settle_trade(100.0, p.assets[3], 1, 0.2), 100.0);
    EXPECT_EQ(settle_trade(100.0, p.assets[3], 0, 0.2), 100.0);
}

TEST(Session, NothingProfitableMeansNoTrade) {
    MarketParams p;
    p.agents = 50;
    p.assets = {AssetSpec::real(1.01, 0.5), AssetSpec::no_investment()};
    auto agents = random_population(50, 1);
    const std::vector<double> x0(50, 100.0);
    const auto seeds = ReplicateSeeds::for_replicate(1, 0);
    for (TaxScheme scheme : {TaxScheme::TobinLike, TaxScheme::Flat}) {
        const auto rec = run_session(agents, 1, seeds.bernoulli(), seeds.permutation(1), p, {scheme}, x0);
        EXPECT_EQ(rec.volume, 0.0);
        EXPECT_EQ(rec.pre_tax, rec.previous);
        EXPECT_EQ(rec.post_tax, rec.previous);
        for (const auto& a : agents) EXPECT_EQ(a.wealth, 100.0);
    }
}

TEST(Session, TwoAgentsShareAmpleAsset) {
    MarketParams p;
    p.agents = 2;
    p.availability_fraction = 1.0;
    auto agents = population({0.55, 0.95});
    const std::vector<double> x0(2, 100.0);
    const auto seeds = ReplicateSeeds::for_replicate(3, 0);
    const auto rec = run_session(agents, 1, seeds.bernoulli(), seeds.permutation(1), p, {}, x0);
    EXPECT_EQ(rec.asset[0], 0u);
    EXPECT_EQ(rec.asset[1], 0u);
    EXPECT_DOUBLE_EQ(rec.volume, 40.0);
}

TEST(Session, SecondAgentCascadesWhenCapacityRunsOut) {
    MarketParams p;
    p.agents = 2;
    p.availability_fraction = 0.15;  // 30 per asset: one stake of 20 fits
    const std::vector<double> x0(2, 100.0);
    const auto seeds = ReplicateSeeds::for_replicate(3, 0);
    {
        auto agents = population({1.0, 1.0});
        const auto rec = run_session(agents, 1, seeds.bernoulli(), seeds.permutation(1), p, {}, x0);
        EXPECT_EQ(rec.asset[rec.order[0]], 0u);
        EXPECT_EQ(rec.asset[rec.order[1]], 1u);
    }
    {
        auto agents = population({0.6, 0.6});
        const auto rec = run_session(agents, 1, seeds.bernoulli(), seeds.permutation(1), p, {}, x0);
        EXPECT_EQ(rec.asset[rec.order[0]], 0u);
        EXPECT_EQ(rec.asset[rec.order[1]], p.virtual_asset());
        EXPECT_DOUBLE_EQ(rec.volume, 20.0);
    }
}

TEST(Session, RecordIsConsistent) {
    const MarketParams p;
    const ReplicateSeeds seeds = ReplicateSeeds::for_replicate(5, 2);
    for (TaxScheme scheme : {TaxScheme::TobinLike, TaxScheme::Flat}) {
        Market market(p, {scheme}, random_population(p.agents, 9));
        for (std::uint64_t k = 1; k <= 60; ++k) {
            const double total = market.total_wealth();
            const auto wealth_before = market.wealths();
            const auto rec = market.run_session(k, seeds);
            const auto bernoulli = seeds.bernoulli();

            std::vector<double> used(3, 0.0);
            double volume = 0.0;
            double max_wealth = 0.0;
            for (std::size_t j = 0; j < p.agents; ++j) {
                EXPECT_EQ(rec.previous[j], wealth_before[j]);
                EXPECT_EQ(rec.outcome[j], bernoulli.outcome(k, j));
                EXPECT_EQ(rec.pre_tax[j], settle_trade(rec.previous[j], p.assets[rec.asset[j]], rec.outcome[j], p.delta));
                EXPECT_GE(rec.post_tax[j], 0.0);
                max_wealth = std::max(max_wealth, rec.previous[j]);
                if (rec.asset[j] != p.virtual_asset()) {
                    EXPECT_EQ(rec.stake[j], p.delta * rec.previous[j]);
                    used[rec.asset[j]] += rec.stake[j];
                    volume += rec.stake[j];
                } else {
                    EXPECT_EQ(rec.stake[j], 0.0);
                }
            }
            EXPECT_NEAR(rec.volume, volume, 1e-9 * volume);
            EXPECT_EQ(trading_volume(rec), rec.volume);
            const double capacity = total * p.availability_fraction;
            for (std::size_t i = 0; i < 3; ++i) {
                EXPECT_GE(rec.pool.remaining(i), 0.0);
                EXPECT_LE(used[i], capacity * (1 + 1e-12));
            }
            EXPECT_LE(rec.volume, std::min(p.agents * p.delta * max_wealth, 3 * capacity) * (1 + 1e-12));
            auto sorted = rec.order;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t j = 0; j < p.agents; ++j) ASSERT_EQ(sorted[j], j);
        }
    }
}

TEST(Session, FreeFunctionMatchesCachedMarket) {
    const MarketParams p;
    const TaxPolicy tax{TaxScheme::TobinLike};
    const auto seeds = ReplicateSeeds::for_replicate(8, 1);
    auto agents = random_population(p.agents, 4);
    Market market(p, tax, agents);
    const std::vector<double> x0(p.agents, 100.0);
    for (std::uint64_t k = 1; k <= 30; ++k) {
        const auto a = run_session(agents, k, seeds.bernoulli(), seeds.permutation(k), p, tax, x0);
        const auto b = market.run_session(k, seeds);
        ASSERT_EQ(a.asset, b.asset);
        ASSERT_EQ(a.post_tax, b.post_tax);
        ASSERT_EQ(a.order, b.order);
    }
}

TEST(Session, Deterministic) {
    const MarketParams p;
    const auto seeds = ReplicateSeeds::for_replicate(21, 0);
    Market a(p, {TaxScheme::Flat}, random_population(p.agents, 2));
    Market b(p, {TaxScheme::Flat}, random_population(p.agents, 2));
    for (std::uint64_t k = 1; k <= 40; ++k) {
        const auto ra = a.run_session(k, seeds);
        const auto rb = b.run_session(k, seeds);
        ASSERT_EQ(ra.post_tax, rb.post_tax);
        ASSERT_EQ(ra.volume, rb.volume);
    }
}

TEST(Session, WealthConservedBeforeTaxWithoutTrades) {
    MarketParams p;
    p.agents = 30;
    p.availability_fraction = 1e-6;  // no stake fits
    auto agents = random_population(30, 3);
    const std::vector<double> x0(30, 100.0);
    const auto seeds = ReplicateSeeds::for_replicate(4, 0);
    const auto rec = run_session(agents, 1, seeds.bernoulli(), seeds.permutation(1), p, {}, x0);
    EXPECT_EQ(std::accumulate(rec.pre_tax.begin(), rec.pre_tax.end(), 0.0),
              std::accumulate(rec.previous.begin(), rec.previous.end(), 0.0));
}

TEST(Market, SetAttitudesRefreshesClasses) {
    const MarketParams p;
    Market market(p, {}, random_population(p.agents, 6));
    std::vector<double> alphas(p.agents, 0.55);
    market.set_attitudes(alphas);
    for (const auto& a : market.agents()) EXPECT_EQ(a.cls, AgentClass::Prudent);
    EXPECT_NE(market.innate_attitudes(), market.attitudes());
}
