#include "wealthnet/errors.hpp"
#include "wealthnet/taxation.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace wealthnet;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

struct Case {
    std::vector<double> pre, prev, x0;
    TaxInputs in() const { return {pre, prev, x0}; }
};

// A random step away from a conserved state: prev sums to sum(x0) (or less),
// pre applies random gains and losses.
Case random_case(std::mt19937_64& rng, std::size_t n, bool below) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Case c;
    c.x0.assign(n, 100.0);
    c.prev.resize(n);
    for (auto& v : c.prev) v = 20.0 + 160.0 * u(rng);
    const double scale = 100.0 * n / sum(c.prev) * (below ? 0.9 + 0.1 * u(rng) : 1.0);
    for (auto& v : c.prev) v *= scale;
    c.pre.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = u(rng);
        const double factor = r < 0.3 ? 1.0 : (r < 0.65 ? 1.0 + 0.2 * 0.6 * u(rng) : 1.0 - 0.2 * 0.6 * u(rng));
        c.pre[j] = c.prev[j] * factor;
    }
    return c;
}

}  // namespace

TEST(TobinTax, HandExample) {
    const Case c{{120, 90}, {100, 100}, {100, 100}};
    const auto out = tobin_tax(c.in());
    EXPECT_DOUBLE_EQ(out[0], 110.0);
    EXPECT_DOUBLE_EQ(out[1], 90.0);
}

TEST(TobinTax, NoProfitLeavesWealthAlone) {
    const Case below{{95, 90}, {100, 100}, {100, 100}};
    EXPECT_EQ(tobin_tax(below.in()), below.pre);
    const Case idle{{100, 100}, {100, 100}, {100, 100}};
    EXPECT_EQ(tobin_tax(idle.in()), idle.pre);
}

TEST(TobinTax, LiteralDenominatorUsesNetGain) {
    // p = 10, net gain = 20 - 10 = 10, so the winner gives back its whole gain.
    const Case c{{120, 90}, {100, 100}, {100, 100}};
    const auto out = tobin_tax(c.in(), TobinDenominator::AllGains);
    EXPECT_DOUBLE_EQ(out[0], 100.0);
    EXPECT_DOUBLE_EQ(out[1], 90.0);
}

TEST(TobinTax, ConservationProperties) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const Case c = random_case(rng, 1 + trial % 60, trial % 3 == 0);
        const auto out = tobin_tax(c.in());
        const double total0 = sum(c.x0);
        const double p = sum(c.pre) - total0;
        const double after = sum(out);
        EXPECT_LE(after, total0 * (1 + 1e-12));
        if (p > 0) EXPECT_NEAR(after, total0, 1e-12 * total0);
        for (std::size_t j = 0; j < c.pre.size(); ++j) {
            const double gain = c.pre[j] - c.prev[j];
            if (gain <= 0) EXPECT_EQ(out[j], c.pre[j]);
            EXPECT_GE(out[j], 0.0);
            EXPECT_GE(out[j], c.prev[j] - 1e-12 * c.prev[j] - (gain < 0 ? -gain : 0));
        }
    }
}

TEST(TobinTax, LengthMismatchRejected) {
    const std::vector<double> a{1, 2}, b{1};
    EXPECT_THROW(tobin_tax({a, b, a}), std::invalid_argument);
}

TEST(FlatTax, HandExamples) {
    const Case c{{300, 100}, {100, 100}, {100, 100}};
    const auto out = flat_tax(c.in());
    EXPECT_DOUBLE_EQ(out[0], 150.0);
    EXPECT_DOUBLE_EQ(out[1], 50.0);
    const Case same{{120, 80}, {100, 100}, {100, 100}};
    EXPECT_EQ(flat_tax(same.in()), same.pre);
    const Case single{{250}, {100}, {100}};
    EXPECT_DOUBLE_EQ(flat_tax(single.in())[0], 100.0);
}

TEST(FlatTax, DegenerateMarket) {
    const Case c{{0, 0}, {100, 100}, {100, 100}};
    EXPECT_THROW(flat_tax(c.in()), DegenerateMarketError);
}

TEST(FlatTax, ConservesAndPreservesRatios) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        const Case c = random_case(rng, 2 + trial % 200, trial % 2 == 0);
        const auto out = flat_tax(c.in());
        EXPECT_NEAR(sum(out), sum(c.x0), 1e-12 * sum(c.x0));
        const double v = sum(c.x0) / sum(c.pre);
        for (std::size_t j = 0; j < out.size(); ++j) {
            EXPECT_EQ(out[j], v * c.pre[j]);
            if (j > 0) EXPECT_EQ(out[j] < out[j - 1], c.pre[j] < c.pre[j - 1]);
        }
    }
}

TEST(ApplyTax, Dispatches) {
    const Case c{{300, 100}, {100, 100}, {100, 100}};
    EXPECT_EQ(apply_tax({TaxScheme::Flat}, c.in()), flat_tax(c.in()));
    EXPECT_EQ(apply_tax({TaxScheme::TobinLike}, c.in()), tobin_tax(c.in()));
    EXPECT_EQ(to_string(TaxScheme::TobinLike), "tobin");
    EXPECT_EQ(to_string(TobinDenominator::AllGains), "literal");
}
