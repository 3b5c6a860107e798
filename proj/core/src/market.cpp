#include "wealthnet/market.hpp"

#include "wealthnet/errors.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wealthnet {

namespace {

template <typename Chooser>
SessionRecord execute_session(std::span<AgentState> agents, std::uint64_t step, const BernoulliStream& outcomes,
                              KeyedStream& permutation, const MarketParams& params, const TaxPolicy& tax,
                              std::span<const double> initial_wealth, Chooser&& choose) {
    const std::size_t n = agents.size();
    if (initial_wealth.size() != n) {
        throw std::invalid_argument("initial wealth vector does not match the population");
    }

    SessionRecord rec;
    rec.step = step;
    rec.asset.assign(n, params.virtual_asset());
    rec.stake.assign(n, 0.0);
    rec.outcome.assign(n, 0);
    rec.previous.resize(n);
    rec.pre_tax.resize(n);

    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        rec.previous[j] = agents[j].wealth;
        total += agents[j].wealth;
    }
    rec.pool = reset_availability(total, params);
    rec.order = random_permutation(n, permutation);

    for (std::size_t j : rec.order) {
        const double prev = rec.previous[j];
        const double stake = params.delta * prev;
        const std::size_t asset = choose(j, stake, rec.pool);
        const int won = outcomes.outcome(step, agents[j].id);
        rec.asset[j] = asset;
        rec.outcome[j] = static_cast<std::uint8_t>(won);
        if (!params.assets[asset].is_virtual) {
            rec.pool.take(asset, stake);
            rec.stake[j] = stake;
        }
        rec.pre_tax[j] = settle_trade(prev, params.assets[asset], won, params.delta);
    }

    rec.volume = std::accumulate(rec.stake.begin(), rec.stake.end(), 0.0);
    rec.post_tax = apply_tax(tax, TaxInputs{rec.pre_tax, rec.previous, initial_wealth});
    for (std::size_t j = 0; j < n; ++j) agents[j].wealth = rec.post_tax[j];
    return rec;
}

}  // namespace

AssetPool reset_availability(double total_wealth, const MarketParams& params) {
    if (total_wealth < 0.0) {
        throw DomainError("negative system wealth " + std::to_string(total_wealth));
    }
    return AssetPool(std::vector<double>(params.real_asset_count(), total_wealth * params.availability_fraction));
}

double settle_trade(double previous_wealth, const AssetSpec& asset, int won, double delta) noexcept {
    const double stake = delta * previous_wealth;
    return won ? previous_wealth + stake * (asset.win_rate - 1.0)
               : previous_wealth - stake * (1.0 - asset.loss_rate);
}

SessionRecord run_session(std::span<AgentState> agents, std::uint64_t step, const BernoulliStream& outcomes,
                          KeyedStream permutation, const MarketParams& params, const TaxPolicy& tax,
                          std::span<const double> initial_wealth) {
    return execute_session(agents, step, outcomes, permutation, params, tax, initial_wealth,
                           [&](std::size_t j, double, const AssetPool& pool) {
                               return choose_asset(agents[j], pool, params.delta, params.assets);
                           });
}

Market::Market(MarketParams params, TaxPolicy tax, std::vector<AgentState> agents)
    : params_(std::move(params)), tax_(tax), agents_(std::move(agents)) {
    initial_.reserve(agents_.size());
    rankings_.reserve(agents_.size());
    for (const auto& a : agents_) {
        initial_.push_back(a.wealth);
        rankings_.push_back(rank_assets(a.alpha.value(), params_.assets));
    }
}

SessionRecord Market::run_session(std::uint64_t step, const ReplicateSeeds& seeds) {
    auto permutation = seeds.permutation(step);
    const std::size_t virtual_asset = params_.virtual_asset();
    return execute_session(agents_, step, seeds.bernoulli(), permutation, params_, tax_, initial_,
                           [&](std::size_t j, double stake, const AssetPool& pool) {
                               return choose_ranked(rankings_[j], stake, pool, virtual_asset);
                           });
}

void Market::set_attitudes(std::span<const double> alphas) {
    if (alphas.size() != agents_.size()) throw std::invalid_argument("attitude vector does not match the population");
    for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (agents_[j].alpha.value() == alphas[j]) continue;
        agents_[j].set_attitude(RiskAttitude(alphas[j]), params_.boundaries);
        rankings_[j] = rank_assets(alphas[j], params_.assets);
    }
}

std::vector<double> Market::wealths() const {
    std::vector<double> out;
    out.reserve(agents_.size());
    for (const auto& a : agents_) out.push_back(a.wealth);
    return out;
}

std::vector<double> Market::attitudes() const {
    std::vector<double> out;
    out.reserve(agents_.size());
    for (const auto& a : agents_) out.push_back(a.alpha.value());
    return out;
}

std::vector<double> Market::innate_attitudes() const {
    std::vector<double> out;
    out.reserve(agents_.size());
    for (const auto& a : agents_) out.push_back(a.alpha0.value());
    return out;
}

double Market::total_wealth() const noexcept {
    double total = 0.0;
    for (const auto& a : agents_) total += a.wealth;
    return total;
}

}  // namespace wealthnet
