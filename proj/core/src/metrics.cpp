#include "wealthnet/metrics.hpp"

#include "wealthnet/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wealthnet {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double gini(std::span<const double> wealth) {
    const std::size_t n = wealth.size();
    if (n < 2) throw MetricError("gini needs at least two agents");
    std::vector<double> sorted(wealth.begin(), wealth.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0.0) throw MetricError("gini of negative wealth");

    double total = 0.0;
    double ranked = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        total += sorted[j];
        ranked += static_cast<double>(j + 1) * sorted[j];
    }
    if (!(total > 0.0)) throw MetricError("gini of zero total wealth");
    const double dn = static_cast<double>(n);
    return 1.0 - 2.0 / (dn - 1.0) * (dn - ranked / total);
}

double trading_volume(const SessionRecord& record) noexcept {
    return std::accumulate(record.stake.begin(), record.stake.end(), 0.0);
}

std::array<double, kClassCount> class_fractions(std::span<const double> alpha, const ClassBoundaries& bounds) {
    std::array<double, kClassCount> out{};
    if (alpha.empty()) return out;
    for (double a : alpha) out[class_index(classify(a, bounds))] += 1.0;
    for (double& f : out) f *= 100.0 / static_cast<double>(alpha.size());
    return out;
}

std::array<double, kClassCount> class_wealth(std::span<const double> wealth, std::span<const double> alpha,
                                             const ClassBoundaries& bounds) {
    std::array<double, kClassCount> out{};
    for (std::size_t j = 0; j < wealth.size(); ++j) out[class_index(classify(alpha[j], bounds))] += wealth[j];
    return out;
}

Interval mean_ci(std::span<const double> samples, double significance) {
    const std::size_t n = samples.size();
    if (n < 2) throw MetricError("confidence interval needs at least two samples");
    if (!(significance > 0.0 && significance < 1.0)) throw MetricError("significance must lie in (0, 1)");

    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    if (se == 0.0) return {mean, mean, mean};

    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(dist, 1.0 - significance / 2.0);
    return {mean, mean - t * se, mean + t * se};
}

Interval summarize(std::span<const double> samples, double significance) {
    std::vector<double> finite;
    finite.reserve(samples.size());
    for (double x : samples) {
        if (std::isfinite(x)) finite.push_back(x);
    }
    if (finite.empty()) return {kNaN, kNaN, kNaN};
    if (finite.size() == 1) return {finite.front(), kNaN, kNaN};
    return mean_ci(finite, significance);
}

std::array<double, kCommunityCount> community_means(std::span<const double> wealth,
                                                    std::span<const Community> communities) {
    std::array<double, kCommunityCount> out;
    out.fill(kNaN);
    for (const auto& c : communities) {
        if (c.empty() || c.id < 1 || c.id > static_cast<int>(kCommunityCount)) continue;
        double total = 0.0;
        for (std::size_t id : c.leaders) total += wealth[id];
        for (std::size_t id : c.followers) total += wealth[id];
        out[static_cast<std::size_t>(c.id - 1)] = total / static_cast<double>(c.member_count());
    }
    return out;
}

CommunityTable community_stats(std::span<const double> wealth, std::span<const double> alpha,
                               std::span<const Community> communities, double mean_wealth,
                               const ClassBoundaries& bounds) {
    if (!(mean_wealth > 0.0)) throw MetricError("reference mean wealth must be positive");
    CommunityTable table;
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        table.communities[c] = {static_cast<int>(c) + 1, kNaN, 0, {kNaN, kNaN, kNaN}};
        table.leaders[c] = {static_cast<int>(c) + 1, kNaN, 0};
    }

    for (const auto& community : communities) {
        if (community.id < 1 || community.id > static_cast<int>(kCommunityCount)) continue;
        const auto slot = static_cast<std::size_t>(community.id - 1);
        auto& row = table.communities[slot];
        auto& lead = table.leaders[slot];
        row.members = community.member_count();
        lead.count = community.leaders.size();
        if (community.empty()) continue;

        std::array<double, kClassCount> counts{};
        double total = 0.0;
        double leader_total = 0.0;
        for (std::size_t id : community.leaders) {
            total += wealth[id];
            leader_total += wealth[id];
            counts[class_index(classify(alpha[id], bounds))] += 1.0;
        }
        for (std::size_t id : community.followers) {
            total += wealth[id];
            counts[class_index(classify(alpha[id], bounds))] += 1.0;
        }
        const auto members = static_cast<double>(row.members);
        row.wealth_ratio = total / members / mean_wealth;
        for (std::size_t k = 0; k < kClassCount; ++k) row.fractions[k] = 100.0 * counts[k] / members;
        if (lead.count > 0) {
            lead.wealth_ratio = leader_total / static_cast<double>(lead.count) / mean_wealth;
        }
    }
    return table;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0) throw MetricError("moving average window must be positive");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= window) sum -= series[i - window];
        out[i] = sum / static_cast<double>(std::min(i + 1, window));
    }
    return out;
}

double tail_mean(std::span<const double> series, std::size_t window) {
    if (series.empty()) throw MetricError("tail mean of an empty series");
    const std::size_t w = std::clamp<std::size_t>(window, 1, series.size());
    const auto tail = series.last(w);
    return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(w);
}

std::optional<std::size_t> steady_state_index(std::span<const double> series, std::size_t window, double tolerance) {
    if (window == 0) throw MetricError("steady-state window must be positive");
    if (series.size() < 2 * window) return std::nullopt;
    for (std::size_t k = 2 * window; k <= series.size(); ++k) {
        const auto recent = series.subspan(k - window, window);
        const auto earlier = series.subspan(k - 2 * window, window);
        const double now = std::accumulate(recent.begin(), recent.end(), 0.0) / static_cast<double>(window);
        const double before = std::accumulate(earlier.begin(), earlier.end(), 0.0) / static_cast<double>(window);
        if (before != 0.0 && std::abs(now - before) / std::abs(before) < tolerance) return k - 1;
    }
    return std::nullopt;
}

bool identical(const StepMetrics& a, const StepMetrics& b) noexcept {
    auto same = [](double x, double y) { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
    if (a.step != b.step || !same(a.gini, b.gini) || !same(a.volume, b.volume) || !same(a.mean_wealth, b.mean_wealth)) {
        return false;
    }
    for (std::size_t k = 0; k < kClassCount; ++k) {
        if (!same(a.fractions[k], b.fractions[k]) || !same(a.class_wealth[k], b.class_wealth[k])) return false;
    }
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        if (!same(a.community_mean[c], b.community_mean[c])) return false;
    }
    return true;
}

}  // namespace wealthnet
