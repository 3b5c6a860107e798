#pragma once

#include "wealthnet/market.hpp"
#include "wealthnet/model.hpp"
#include "wealthnet/network.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wealthnet {

/// Sample Gini coefficient with the (n - 1) normalisation:
///   G = 1 - 2/(n-1) * (n - sum_j j x_(j) / sum_j x_(j)),  x sorted ascending, j 1-based.
/// Throws MetricError for fewer than two agents, negative wealth or a zero total.
double gini(std::span<const double> wealth);

/// Sum of real-asset stakes placed in the session.
double trading_volume(const SessionRecord& record) noexcept;

/// Percentage of agents in each class.
std::array<double, kClassCount> class_fractions(std::span<const double> alpha, const ClassBoundaries& bounds = {});

/// Total wealth held by each class.
std::array<double, kClassCount> class_wealth(std::span<const double> wealth, std::span<const double> alpha,
                                             const ClassBoundaries& bounds = {});

struct Interval {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    bool overlaps(const Interval& other) const noexcept { return lo <= other.hi && other.lo <= hi; }
};

/// Student-t two-sided confidence interval on the mean. Throws MetricError
/// with fewer than two samples.
Interval mean_ci(std::span<const double> samples, double significance = 0.05);

/// mean_ci over the finite samples only; NaN bounds with a single finite
/// sample and all NaN with none.
Interval summarize(std::span<const double> samples, double significance = 0.05);

struct CommunityRow {
    int id = 0;
    double wealth_ratio = 0.0;  ///< mean member wealth / reference mean, NaN when empty
    std::size_t members = 0;
    std::array<double, kClassCount> fractions{};  ///< percentages, NaN when empty
};

struct LeaderRow {
    int id = 0;
    double wealth_ratio = 0.0;  ///< mean leader wealth / reference mean, NaN without leaders
    std::size_t count = 0;
};

struct CommunityTable {
    std::array<CommunityRow, kCommunityCount> communities{};
    std::array<LeaderRow, kCommunityCount> leaders{};
};

/// Per-community and per-leader-group statistics, wealth expressed relative
/// to `mean_wealth` (the constant average wealth x̄).
CommunityTable community_stats(std::span<const double> wealth, std::span<const double> alpha,
                               std::span<const Community> communities, double mean_wealth,
                               const ClassBoundaries& bounds = {});

/// Mean wealth of each community's members, NaN for empty communities.
std::array<double, kCommunityCount> community_means(std::span<const double> wealth,
                                                    std::span<const Community> communities);

/// Trailing moving average; the first window-1 points average what exists.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

/// Mean of the last `window` values (all values if fewer).
double tail_mean(std::span<const double> series, std::size_t window);

/// Last index of the first trailing window whose mean differs from the mean
/// of the window before it by less than `tolerance` (relative).
std::optional<std::size_t> steady_state_index(std::span<const double> series, std::size_t window,
                                              double tolerance = 0.005);

/// Observables recorded at the end of every step (k = 0 is the initial state).
struct StepMetrics {
    std::uint64_t step = 0;
    double gini = 0.0;
    double volume = 0.0;
    double mean_wealth = 0.0;
    std::array<double, kClassCount> fractions{};
    std::array<double, kClassCount> class_wealth{};
    std::array<double, kCommunityCount> community_mean{};  ///< NaN until communities exist
};

/// Bitwise equality, NaN fields included.
bool identical(const StepMetrics& a, const StepMetrics& b) noexcept;

}  // namespace wealthnet
