#include "oracles.hpp"

#include "wealthnet/errors.hpp"
#include "wealthnet/herding.hpp"
#include "wealthnet/network.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wealthnet;
namespace t = wealthnet::testing;

namespace {

InAdjacency adjacency(std::size_t n, const std::vector<Edge>& edges) {
    InteractionGraph g(n);
    for (const auto& e : edges) g.add_edge(e.src, e.dst);
    return g.in_adjacency();
}

InteractionGraph random_community_graph(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    const auto wealth = t::random_wealth(rng, n);
    const auto alpha = t::random_attitudes(rng, n);
    KeyedStream k(seed);
    const auto leaders = select_leaders(wealth, alpha, std::max<std::size_t>(1, n / 100));
    const auto cs = partition_followers(leaders, wealth, k);
    return build_community_graph(cs, wealth, n, 1 + seed % 3, k);
}

}  // namespace

TEST(Herding, HandExamples) {
    const auto adj = adjacency(3, {{1, 0}, {2, 0}});
    const std::vector<double> prev{0.6, 0.8, 1.0};
    const std::vector<double> innate{0.6, 0.8, 1.0};
    EXPECT_DOUBLE_EQ(update_attitudes(prev, innate, adj, 0.5)[0], 0.75);
    EXPECT_EQ(update_attitudes(prev, innate, adj, 0.0), innate);

    const auto single = adjacency(2, {{1, 0}});
    const std::vector<double> p2{0.55, 0.9};
    EXPECT_DOUBLE_EQ(update_attitudes(p2, p2, single, 1.0)[0], 0.9);
}

TEST(Herding, NodesWithoutInfluenceKeepTheirValue) {
    const auto adj = adjacency(3, {{0, 1}});
    const std::vector<double> prev{0.7, 0.6, 0.95};
    const std::vector<double> innate{0.7, 0.5, 0.9};
    const auto next = update_attitudes(prev, innate, adj, 0.8);
    EXPECT_EQ(next[0], 0.7);
    EXPECT_EQ(next[2], 0.95);
    EXPECT_DOUBLE_EQ(next[1], 0.2 * 0.5 + 0.8 * 0.7);
}

TEST(Herding, SynchronousAndNotInPlace) {
    // A two-cycle swaps values only if both read the previous snapshot.
    const auto adj = adjacency(2, {{0, 1}, {1, 0}});
    std::vector<double> prev{0.5, 1.0};
    const auto next = update_attitudes(prev, prev, adj, 1.0);
    EXPECT_EQ(next, (std::vector<double>{1.0, 0.5}));
    EXPECT_THROW(update_attitudes(prev, prev, adj, 1.0, std::span<double>(prev)), std::invalid_argument);
}

TEST(Herding, ClosureOverRandomGraphs) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto g = random_community_graph(seed, 400);
        const auto adj = g.in_adjacency();
        const auto innate = t::random_attitudes(rng, 400);
        auto alpha = innate;
        const double w = weight(rng);
        for (int k = 0; k < 50; ++k) {
            alpha = update_attitudes(alpha, innate, adj, w);
            for (double a : alpha) {
                ASSERT_GE(a, 0.5);
                ASSERT_LE(a, 1.0);
            }
        }
        for (std::size_t v = 0; v < 400; ++v) {
            if (g.role(v) == NodeRole::Leader) EXPECT_EQ(alpha[v], innate[v]);
        }
    }
}

TEST(Herding, ConvergesToFixedPoint) {
    std::mt19937_64 rng(23);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = random_community_graph(100 + seed, 500);
        const auto adj = g.in_adjacency();
        const auto innate = t::random_attitudes(rng, 500);
        auto alpha = t::random_attitudes(rng, 500);
        const double w = 0.5 + 0.45 * static_cast<double>(seed) / 9.0;
        double last = INFINITY;
        bool converged = false;
        for (int k = 0; k < 10000 && !converged; ++k) {
            const auto next = update_attitudes(alpha, innate, adj, w);
            double change = 0.0;
            for (std::size_t v = 0; v < 500; ++v) change = std::max(change, std::fabs(next[v] - alpha[v]));
            // The update contracts the sup norm by w, so changes never grow.
            if (k > 10) EXPECT_LE(change, last * (1 + 1e-9) + 1e-15);
            last = change;
            alpha = next;
            converged = change < 1e-10;
        }
        EXPECT_TRUE(converged) << "w=" << w;
    }
}

TEST(HerdingParams, Validation) {
    HerdingParams p;
    p.weight = 1.2;
    try {
        p.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "w");
    }
    p = HerdingParams{};
    p.trigger_step = 0;
    EXPECT_THROW(p.validate(), ConfigError);
}
