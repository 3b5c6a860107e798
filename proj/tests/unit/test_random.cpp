#include "wealthnet/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace wealthnet;

TEST(Random, Mix64KnownValues) {
    // Reference outputs of the SplitMix64 generator seeded with 0.
    EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFull);
    EXPECT_EQ(mix64(0x9E3779B97F4A7C15ull), 0x6E789E6AA1B965F4ull);
}

TEST(Random, DeriveKeyDependsOnEveryPart) {
    const auto base = derive_key(1, "perm", {3});
    EXPECT_EQ(base, derive_key(1, "perm", {3}));
    EXPECT_NE(base, derive_key(2, "perm", {3}));
    EXPECT_NE(base, derive_key(1, "perms", {3}));
    EXPECT_NE(base, derive_key(1, "perm", {4}));
    EXPECT_NE(base, derive_key(1, "perm", {3, 0}));
}

TEST(Random, ReplicateSeedsDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 20000; ++r) seen.insert(ReplicateSeeds::for_replicate(1, r).replicate_seed);
    EXPECT_EQ(seen.size(), 20000u);
}

TEST(Random, KeyedStreamReproducible) {
    KeyedStream a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
    EXPECT_EQ(a.draws(), 100u);
}

TEST(Random, UniformInUnitInterval) {
    KeyedStream s(5);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_EQ(to_unit_interval(~0ull), 1.0 - 0x1.0p-53);
}

TEST(Random, BelowIsBoundedAndRoughlyUniform) {
    KeyedStream s(9);
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = s.below(7);
        ASSERT_LT(v, 7u);
        ++counts[v];
    }
    for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
}

TEST(Random, PermutationIsValidAndDeterministic) {
    KeyedStream a(3), b(3);
    const auto p = random_permutation(1000, a);
    EXPECT_EQ(p, random_permutation(1000, b));
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Random, PermutationPositionsUnbiased) {
    // Probability that element 0 lands first over many independent streams.
    int first = 0;
    const int trials = 60000;
    for (int t = 0; t < trials; ++t) {
        KeyedStream s(derive_key(77, "t", {static_cast<std::uint64_t>(t)}));
        if (random_permutation(6, s)[0] == 0) ++first;
    }
    const double p = 1.0 / 6.0;
    EXPECT_NEAR(first, trials * p, 5.0 * std::sqrt(trials * p * (1 - p)));
}

TEST(Bernoulli, FairWithinBinomialBound) {
    const BernoulliStream b(ReplicateSeeds::for_replicate(1, 0).bernoulli());
    long wins = 0;
    const long n = 1000000;
    for (std::uint64_t k = 1; k <= 1000; ++k) {
        for (std::uint64_t j = 0; j < 1000; ++j) wins += b.outcome(k, j);
    }
    EXPECT_NEAR(static_cast<double>(wins), n * 0.5, 3.0 * std::sqrt(n * 0.25));
}

TEST(Bernoulli, AddressedByKeyNotByOrder) {
    const auto seeds = ReplicateSeeds::for_replicate(11, 4);
    const auto a = seeds.bernoulli();
    std::vector<int> forward, backward;
    for (std::uint64_t j = 0; j < 500; ++j) forward.push_back(a.outcome(7, j));
    for (std::uint64_t j = 500; j-- > 0;) backward.push_back(seeds.bernoulli().outcome(7, j));
    std::reverse(backward.begin(), backward.end());
    EXPECT_EQ(forward, backward);
}

TEST(Bernoulli, StepsAndAgentsDecorrelated) {
    const auto b = ReplicateSeeds::for_replicate(2, 0).bernoulli();
    int agree = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) agree += b.outcome(i + 1, 5) == b.outcome(i + 2, 5);
    EXPECT_NEAR(agree, n / 2.0, 4.0 * std::sqrt(n / 4.0));
}
