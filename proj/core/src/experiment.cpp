#include "wealthnet/experiment.hpp"

#include "wealthnet/errors.hpp"
#include "wealthnet/random.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace wealthnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t digest(std::span<const AgentState> agents) noexcept {
    std::uint64_t h = 0x6A09E667F3BCC909ull;
    for (const auto& a : agents) {
        h = mix64(h ^ std::bit_cast<std::uint64_t>(a.wealth));
        h = mix64(h ^ std::bit_cast<std::uint64_t>(a.alpha.value()));
    }
    return h;
}

StepMetrics measure(std::uint64_t step, double volume, const Market& market,
                    std::span<const Community> communities) {
    const auto wealth = market.wealths();
    const auto alpha = market.attitudes();
    const auto& bounds = market.params().boundaries;
    StepMetrics m;
    m.step = step;
    m.gini = gini(wealth);
    m.volume = volume;
    m.mean_wealth = market.total_wealth() / static_cast<double>(wealth.size());
    m.fractions = class_fractions(alpha, bounds);
    m.class_wealth = class_wealth(wealth, alpha, bounds);
    m.community_mean.fill(kNaN);
    if (!communities.empty()) m.community_mean = community_means(wealth, communities);
    return m;
}

std::vector<AgentState> initial_population(const ScenarioConfig& config, const ReplicateSeeds& seeds) {
    auto rng = seeds.attitudes();
    std::vector<AgentState> agents;
    agents.reserve(config.market.agents);
    const double span = RiskAttitude::kMax - RiskAttitude::kMin;
    for (std::size_t j = 0; j < config.market.agents; ++j) {
        const RiskAttitude innate(RiskAttitude::kMin + span * rng.uniform());
        agents.push_back(AgentState::make(j, config.market.initial_wealth, innate, config.market.boundaries));
    }
    return agents;
}

bool rewirable(const InteractionGraph& graph) {
    std::set<int> labels;
    for (const auto& e : graph.edges()) {
        if (graph.community(e.src) == graph.community(e.dst)) labels.insert(graph.community(e.src));
    }
    return labels.size() >= 2;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return std::clamp<std::size_t>(w, 1, std::max<std::size_t>(jobs, 1));
}

}  // namespace

std::string_view to_string(Scenario s) noexcept { return s == Scenario::Reference ? "reference" : "focal"; }

void ScenarioConfig::validate() const {
    market.validate();
    herding.validate();
    if (network.edges_per_node < 1) throw ConfigError("edges_per_node", "must be at least 1");
    if (network.leader_count < 1 || network.leader_count > market.agents) {
        throw ConfigError("leaders", "must lie in [1, n]");
    }
    if (!(network.rewire_fraction >= 0.0 && network.rewire_fraction <= kMaxRewireFraction)) {
        throw ConfigError("rewire_fraction", "must lie in [0, 0.05]");
    }
    if (run.replicates < 2) throw ConfigError("replicates", "must be at least 2");
    if (run.steady_window < 1) throw ConfigError("steady_window", "must be at least 1");
    if (run.moving_average < 1) throw ConfigError("moving_average", "must be at least 1");
}

ReplicateSummary ReplicateResult::summary(const ScenarioConfig& config) const {
    ReplicateSummary s;
    s.replicate = index;
    s.seed = seed;
    std::vector<double> gini_series;
    std::vector<double> volume_series;
    gini_series.reserve(series.size());
    volume_series.reserve(series.size());
    // The initial snapshot has no session and stays out of the steady-state window.
    for (std::size_t k = series.size() > 1 ? 1 : 0; k < series.size(); ++k) {
        gini_series.push_back(series[k].gini);
        volume_series.push_back(series[k].volume);
    }
    s.final_gini = series.back().gini;
    s.steady_gini = tail_mean(gini_series, config.run.steady_window);
    s.steady_volume = tail_mean(volume_series, config.run.steady_window);
    s.class_wealth = series.back().class_wealth;
    s.class_share = series.back().fractions;
    const auto& bounds = config.market.boundaries;
    if (communities_formed) {
        s.table = community_stats(final_wealth, final_alpha, communities, config.market.initial_wealth, bounds);
    } else {
        s.table = community_stats(final_wealth, final_alpha, {}, config.market.initial_wealth, bounds);
    }
    s.cross_edges = static_cast<double>(cross_edges);
    return s;
}

ReplicateResult run_replicate(const ScenarioConfig& config, std::size_t index, bool keep_graph) {
    const auto seeds = ReplicateSeeds::for_replicate(config.run.seed, index);
    Market market(config.market, config.tax, initial_population(config, seeds));

    ReplicateResult out;
    out.index = index;
    out.seed = seeds.replicate_seed;
    out.innate_alpha = market.innate_attitudes();
    out.series.reserve(config.run.steps + 1);
    out.digests.reserve(config.run.steps + 1);
    for (double a : out.innate_alpha) {
        out.alpha_min = std::min(out.alpha_min, a);
        out.alpha_max = std::max(out.alpha_max, a);
    }
    out.series.push_back(measure(0, 0.0, market, out.communities));
    out.digests.push_back(digest(market.agents()));

    const bool focal = config.scenario == Scenario::Focal;
    InAdjacency influence;
    std::vector<double> next(config.market.agents);

    for (std::uint64_t k = 1; k <= config.run.steps; ++k) {
        const SessionRecord record = market.run_session(k, seeds);

        if (k == config.herding.trigger_step) {
            const auto wealth = market.wealths();
            out.leaders = select_leaders(wealth, market.attitudes(), config.network.leader_count,
                                         config.market.boundaries);
            auto partition_rng = seeds.partition();
            out.communities = partition_followers(out.leaders, wealth, partition_rng);
            auto graph_rng = seeds.graph();
            InteractionGraph graph = build_community_graph(out.communities, wealth, config.market.agents,
                                                           config.network.edges_per_node, graph_rng);
            if (config.network.rewire_fraction > 0.0 && rewirable(graph)) {
                auto rewire_rng = seeds.rewiring();
                graph = rewire_cross_community(std::move(graph), config.network.rewire_fraction, rewire_rng);
            }
            out.cross_edges = graph.cross_community_edges();
            influence = graph.in_adjacency();
            if (keep_graph) out.graph = std::move(graph);
            out.communities_formed = true;
        }

        if (focal && out.communities_formed) {
            const auto current = market.attitudes();
            update_attitudes(current, out.innate_alpha, influence, config.herding.weight, next);
            market.set_attitudes(next);
            const auto [lo, hi] = std::minmax_element(next.begin(), next.end());
            out.alpha_min = std::min(out.alpha_min, *lo);
            out.alpha_max = std::max(out.alpha_max, *hi);
        }

        out.series.push_back(measure(k, record.volume, market, out.communities));
        out.digests.push_back(digest(market.agents()));
    }

    out.final_wealth = market.wealths();
    out.final_alpha = market.attitudes();
    return out;
}

TwinResult run_twin(const ScenarioConfig& config, std::size_t index) {
    ScenarioConfig reference = config;
    reference.scenario = Scenario::Reference;
    ScenarioConfig focal = config;
    focal.scenario = Scenario::Focal;
    return {run_replicate(reference, index), run_replicate(focal, index)};
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = worker_count(workers, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

RunAggregate aggregate(std::span<const ReplicateSummary> summaries,
                       std::span<const std::vector<StepMetrics>> series, const ScenarioConfig& config) {
    RunAggregate agg;
    agg.replicates = summaries.size();
    if (summaries.empty()) return agg;

    std::vector<double> column(summaries.size());
    auto collect = [&](auto&& field) {
        for (std::size_t r = 0; r < summaries.size(); ++r) column[r] = field(summaries[r]);
        return summarize(column);
    };

    agg.final_gini = collect([](const ReplicateSummary& s) { return s.final_gini; });
    agg.steady_gini = collect([](const ReplicateSummary& s) { return s.steady_gini; });
    agg.steady_volume = collect([](const ReplicateSummary& s) { return s.steady_volume; });
    agg.cross_edges = collect([](const ReplicateSummary& s) { return s.cross_edges; });
    for (std::size_t c = 0; c < kClassCount; ++c) {
        agg.class_wealth[c] = collect([c](const ReplicateSummary& s) { return s.class_wealth[c]; });
        agg.class_share[c] = collect([c](const ReplicateSummary& s) { return s.class_share[c]; });
    }
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        auto& com = agg.communities[c];
        com.wealth_ratio = collect([c](const ReplicateSummary& s) { return s.table.communities[c].wealth_ratio; });
        com.members = collect(
            [c](const ReplicateSummary& s) { return static_cast<double>(s.table.communities[c].members); });
        for (std::size_t k = 0; k < kClassCount; ++k) {
            com.fractions[k] =
                collect([c, k](const ReplicateSummary& s) { return s.table.communities[c].fractions[k]; });
        }
        agg.leaders[c].wealth_ratio = collect([c](const ReplicateSummary& s) { return s.table.leaders[c].wealth_ratio; });
        agg.leaders[c].count =
            collect([c](const ReplicateSummary& s) { return static_cast<double>(s.table.leaders[c].count); });
    }

    std::size_t steps = series.empty() ? 0 : series.front().size();
    for (const auto& s : series) steps = std::min(steps, s.size());
    agg.series.resize(steps);
    std::vector<double> values(series.size());
    std::vector<double> volume_means(steps);
    std::vector<double> gini_means(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        auto& point = agg.series[k];
        auto across = [&](auto&& field) {
            for (std::size_t r = 0; r < series.size(); ++r) values[r] = field(series[r][k]);
            return summarize(values);
        };
        point.step = series.front()[k].step;
        point.gini = across([](const StepMetrics& m) { return m.gini; });
        point.volume = across([](const StepMetrics& m) { return m.volume; });
        point.mean_wealth = across([](const StepMetrics& m) { return m.mean_wealth; });
        for (std::size_t c = 0; c < kClassCount; ++c) {
            point.fractions[c] = across([c](const StepMetrics& m) { return m.fractions[c]; }).mean;
            point.community_mean[c] = across([c](const StepMetrics& m) { return m.community_mean[c]; }).mean;
        }
        volume_means[k] = point.volume.mean;
        gini_means[k] = point.gini.mean;
    }
    const auto smoothed = moving_average(volume_means, config.run.moving_average);
    for (std::size_t k = 0; k < steps; ++k) agg.series[k].volume_smoothed = smoothed[k];
    if (steps > 1) {
        const auto index = steady_state_index(std::span<const double>(gini_means).subspan(1), config.run.steady_window);
        if (index) agg.steady_state_step = agg.series[*index + 1].step;
    }
    return agg;
}

std::vector<ReplicateSummary> MonteCarloResult::summaries(const ScenarioConfig& config) const {
    std::vector<ReplicateSummary> out;
    out.reserve(replicates.size());
    for (const auto& r : replicates) out.push_back(r.summary(config));
    return out;
}

MonteCarloResult monte_carlo(const ScenarioConfig& config) {
    config.validate();
    MonteCarloResult result;
    result.replicates.resize(config.run.replicates);
    parallel_for(config.run.replicates, config.run.workers,
                 [&](std::size_t i) { result.replicates[i] = run_replicate(config, i, i == 0); });

    const auto rows = result.summaries(config);
    std::vector<std::vector<StepMetrics>> series;
    series.reserve(result.replicates.size());
    for (const auto& r : result.replicates) series.push_back(r.series);
    result.aggregate = aggregate(rows, series, config);
    return result;
}

TwinSet monte_carlo_twins(const ScenarioConfig& config) {
    ScenarioConfig reference = config;
    reference.scenario = Scenario::Reference;
    ScenarioConfig focal = config;
    focal.scenario = Scenario::Focal;
    return {monte_carlo(reference), monte_carlo(focal)};
}

std::vector<KtSweepRow> sweep_kt(const ScenarioConfig& config, std::span<const std::uint64_t> trigger_steps) {
    config.validate();
    if (trigger_steps.empty()) throw std::invalid_argument("sweep needs at least one trigger step");
    std::vector<std::uint64_t> steps(trigger_steps.begin(), trigger_steps.end());
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    if (steps.front() < 1) throw ConfigError("kt", "trigger steps must be at least 1");

    const std::size_t replicates = config.run.replicates;
    // counts[r][s][c]: leaders of class c at trigger step s in replicate r
    std::vector<std::vector<std::array<double, kClassCount>>> counts(
        replicates, std::vector<std::array<double, kClassCount>>(steps.size()));

    parallel_for(replicates, config.run.workers, [&](std::size_t r) {
        const auto seeds = ReplicateSeeds::for_replicate(config.run.seed, r);
        Market market(config.market, config.tax, initial_population(config, seeds));
        std::size_t next = 0;
        for (std::uint64_t k = 1; next < steps.size(); ++k) {
            market.run_session(k, seeds);
            if (k == steps[next]) {
                const auto groups = select_leaders(market.wealths(), market.attitudes(),
                                                   config.network.leader_count, config.market.boundaries);
                for (std::size_t c = 0; c < kClassCount; ++c) {
                    counts[r][next][c] = static_cast<double>(groups.by_class[c].size());
                }
                ++next;
            }
        }
    });

    std::vector<KtSweepRow> rows(steps.size());
    std::vector<double> column(replicates);
    for (std::size_t s = 0; s < steps.size(); ++s) {
        rows[s].trigger_step = steps[s];
        for (std::size_t c = 0; c < kClassCount; ++c) {
            for (std::size_t r = 0; r < replicates; ++r) column[r] = counts[r][s][c];
            rows[s].leaders[c] = summarize(column);
        }
    }
    return rows;
}

RobustnessResult robustness_rewire(const ScenarioConfig& config, double fraction) {
    ScenarioConfig base = config;
    base.network.rewire_fraction = 0.0;
    ScenarioConfig rewired = config;
    rewired.network.rewire_fraction = fraction;
    rewired.validate();

    RobustnessResult out;
    out.fraction = fraction;
    out.baseline = monte_carlo(base).aggregate;
    out.rewired = monte_carlo(rewired).aggregate;
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        const auto& a = out.baseline.communities[c].wealth_ratio;
        const auto& b = out.rewired.communities[c].wealth_ratio;
        const bool comparable = std::isfinite(a.lo) && std::isfinite(b.lo);
        out.overlap[c] = !comparable || a.overlaps(b);
    }
    return out;
}

}  // namespace wealthnet
