#pragma once

#include "wealthnet/herding.hpp"
#include "wealthnet/market.hpp"
#include "wealthnet/metrics.hpp"
#include "wealthnet/model.hpp"
#include "wealthnet/network.hpp"
#include "wealthnet/taxation.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace wealthnet {

/// Reference agents keep their innate attitude; focal agents emulate their
/// in-neighbours from the trigger step on.
enum class Scenario { Reference, Focal };

std::string_view to_string(Scenario s) noexcept;

struct NetworkParams {
    std::size_t edges_per_node = 2;
    std::size_t leader_count = 10;
    double rewire_fraction = 0.0;
};

struct RunParams {
    std::size_t steps = 1000;
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    std::size_t workers = 0;        ///< 0: one per hardware thread
    std::size_t steady_window = 100;
    std::size_t moving_average = 10;
};

inline constexpr double kMaxRewireFraction = 0.05;

struct ScenarioConfig {
    Scenario scenario = Scenario::Reference;
    TaxPolicy tax;
    MarketParams market;
    HerdingParams herding;
    NetworkParams network;
    RunParams run;

    /// Throws ConfigError naming the first invalid key.
    void validate() const;
};

/// Flat per-replicate record; everything the aggregate tables are built from.
struct ReplicateSummary {
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double final_gini = 0.0;
    double steady_gini = 0.0;
    double steady_volume = 0.0;
    std::array<double, kClassCount> class_wealth{};
    std::array<double, kClassCount> class_share{};  ///< percentage of agents per class at T
    CommunityTable table;
    double cross_edges = 0.0;
};

struct ReplicateResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::vector<StepMetrics> series;     ///< k = 0 .. T
    std::vector<std::uint64_t> digests;  ///< hash of wealth and attitudes after each step
    std::vector<double> final_wealth;
    std::vector<double> final_alpha;
    std::vector<double> innate_alpha;
    double alpha_min = 1.0;  ///< extremes over every agent and step
    double alpha_max = 0.5;

    bool communities_formed = false;
    LeaderGroups leaders;
    std::vector<Community> communities;
    std::optional<InteractionGraph> graph;
    std::size_t cross_edges = 0;

    ReplicateSummary summary(const ScenarioConfig& config) const;
};

/// Steps 1..T: session (with tax), then at k = k_t communities and graph are
/// built from the wealth at k_t, then for focal runs with k >= k_t one
/// attitude update. Communities are formed in both scenarios so reference
/// runs can be tabulated against their focal twins.
ReplicateResult run_replicate(const ScenarioConfig& config, std::size_t index, bool keep_graph = true);

struct TwinResult {
    ReplicateResult reference;
    ReplicateResult focal;
};

TwinResult run_twin(const ScenarioConfig& config, std::size_t index);

struct SeriesPoint {
    std::uint64_t step = 0;
    Interval gini;
    Interval volume;
    Interval mean_wealth;
    double volume_smoothed = 0.0;
    std::array<double, kClassCount> fractions{};
    std::array<double, kCommunityCount> community_mean{};
};

struct CommunityAggregate {
    Interval wealth_ratio;
    Interval members;
    std::array<Interval, kClassCount> fractions{};
};

struct LeaderAggregate {
    Interval wealth_ratio;
    Interval count;
};

struct RunAggregate {
    std::size_t replicates = 0;
    std::vector<SeriesPoint> series;
    Interval final_gini;
    Interval steady_gini;
    Interval steady_volume;
    std::array<Interval, kClassCount> class_wealth{};
    std::array<Interval, kClassCount> class_share{};
    std::array<CommunityAggregate, kCommunityCount> communities{};
    std::array<LeaderAggregate, kCommunityCount> leaders{};
    Interval cross_edges;
    std::optional<std::uint64_t> steady_state_step;
};

/// Deterministic reduction; rows are used in replicate-index order.
RunAggregate aggregate(std::span<const ReplicateSummary> summaries,
                       std::span<const std::vector<StepMetrics>> series, const ScenarioConfig& config);

struct MonteCarloResult {
    std::vector<ReplicateResult> replicates;
    RunAggregate aggregate;

    std::vector<ReplicateSummary> summaries(const ScenarioConfig& config) const;
};

/// Runs replicates 0..R-1 on up to `run.workers` threads. Output does not
/// depend on scheduling. Only replicate 0 keeps its graph.
MonteCarloResult monte_carlo(const ScenarioConfig& config);

struct TwinSet {
    MonteCarloResult reference;
    MonteCarloResult focal;
};

TwinSet monte_carlo_twins(const ScenarioConfig& config);

struct KtSweepRow {
    std::uint64_t trigger_step = 0;
    std::array<Interval, kClassCount> leaders{};
};

/// Mean leader count per class for each trigger step. Attitudes are innate
/// before the trigger, so one run per replicate serves every k_t.
std::vector<KtSweepRow> sweep_kt(const ScenarioConfig& config, std::span<const std::uint64_t> trigger_steps);

struct RobustnessResult {
    double fraction = 0.0;
    RunAggregate baseline;
    RunAggregate rewired;
    std::array<bool, kCommunityCount> overlap{};  ///< wealth-ratio CIs overlap (true for empty pairs)
};

/// Same seeds with and without cross-community rewiring.
RobustnessResult robustness_rewire(const ScenarioConfig& config, double fraction);

/// Calls fn(i) for i in [0, count) on `workers` threads (0: hardware). The
/// first exception thrown by any call is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace wealthnet
