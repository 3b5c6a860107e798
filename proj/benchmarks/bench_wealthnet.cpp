#include <wealthnet/config.hpp>
#include <wealthnet/experiment.hpp>
#include <wealthnet/market.hpp>
#include <wealthnet/metrics.hpp>
#include <wealthnet/network.hpp>
#include <wealthnet/random.hpp>

#include <benchmark/benchmark.h>

#include <vector>

namespace wn = wealthnet;

namespace {

std::vector<double> spread(std::size_t n, std::uint64_t seed) {
    wn::KeyedStream rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = 1.0 + 200.0 * rng.uniform();
    return x;
}

std::vector<double> attitudes(std::size_t n, std::uint64_t seed) {
    wn::KeyedStream rng(seed);
    std::vector<double> a(n);
    for (auto& v : a) v = 0.5 + 0.5 * rng.uniform();
    return a;
}

void BM_Gini(benchmark::State& state) {
    const auto x = spread(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(wn::gini(x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gini)->Arg(1000)->Arg(10000);

void BM_Session(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    wn::MarketParams params;
    params.agents = n;
    const auto alpha = attitudes(n, 2);
    std::vector<wn::AgentState> agents;
    for (std::size_t j = 0; j < n; ++j) {
        agents.push_back(wn::AgentState::make(j, 100.0, wn::RiskAttitude(alpha[j]), params.boundaries));
    }
    wn::Market market(params, wn::TaxPolicy{}, agents);
    const auto seeds = wn::ReplicateSeeds::for_replicate(3, 0);
    std::uint64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(market.run_session(++k, seeds));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Session)->Arg(1000)->Arg(10000);

void BM_CommunityGraph(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto wealth = spread(n, 4);
    const auto alpha = attitudes(n, 5);
    wn::KeyedStream part(6);
    const auto communities = wn::partition_followers(wn::select_leaders(wealth, alpha, 10), wealth, part);
    for (auto _ : state) {
        wn::KeyedStream rng(7);
        benchmark::DoNotOptimize(wn::build_community_graph(communities, wealth, n, 2, rng));
    }
}
BENCHMARK(BM_CommunityGraph)->Arg(1000)->Arg(10000);

void BM_Replicate(benchmark::State& state) {
    auto config = wn::default_config();
    wn::apply_preset(config, "desk");
    config.scenario = wn::Scenario::Focal;
    config.run.steps = static_cast<std::size_t>(state.range(0));
    config.herding.trigger_step = config.run.steps / 2;
    std::size_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(wn::run_replicate(config, index++, false));
}
BENCHMARK(BM_Replicate)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
