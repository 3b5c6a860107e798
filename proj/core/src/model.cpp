#include "wealthnet/model.hpp"

#include "wealthnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wealthnet {

RiskAttitude::RiskAttitude(double value) : value_(value) {
    if (!(value >= kMin && value <= kMax)) {
        throw DomainError("risk attitude " + std::to_string(value) + " outside [0.5, 1]");
    }
}

std::string_view to_string(AgentClass c) noexcept {
    switch (c) {
        case AgentClass::Prudent: return "prudent";
        case AgentClass::Ordinary: return "ordinary";
        case AgentClass::Audacious: return "audacious";
    }
    return "unknown";
}

AgentClass classify(double alpha, const ClassBoundaries& bounds) {
    if (!(alpha >= RiskAttitude::kMin && alpha <= RiskAttitude::kMax)) {
        throw DomainError("cannot classify attitude " + std::to_string(alpha));
    }
    if (alpha < bounds.ordinary) return AgentClass::Prudent;
    if (alpha < bounds.audacious) return AgentClass::Ordinary;
    return AgentClass::Audacious;
}

double utility_multiplier(double alpha, const AssetSpec& asset) noexcept {
    return 0.5 * (std::pow(asset.win_rate, alpha) + std::pow(asset.loss_rate, alpha));
}

double expected_utility(double wealth, RiskAttitude alpha, double delta, const AssetSpec& asset) {
    const double stake = delta * wealth;
    if (!(stake > 0.0)) {
        throw DomainError("expected utility needs a positive stake, got " + std::to_string(stake));
    }
    const double a = alpha.value();
    return 0.5 * (std::pow(asset.win_rate * stake, a) + std::pow(asset.loss_rate * stake, a));
}

std::vector<std::size_t> rank_assets(double alpha, std::span<const AssetSpec> assets) {
    std::vector<std::size_t> ranking;
    std::vector<double> gain(assets.size());
    double baseline = 1.0;
    for (std::size_t i = 0; i < assets.size(); ++i) {
        gain[i] = utility_multiplier(alpha, assets[i]);
        if (assets[i].is_virtual) baseline = gain[i];
    }
    for (std::size_t i = 0; i < assets.size(); ++i) {
        if (!assets[i].is_virtual && gain[i] > baseline) ranking.push_back(i);
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [&](std::size_t l, std::size_t r) { return gain[l] > gain[r]; });
    return ranking;
}

AgentState AgentState::make(std::size_t id, double wealth, RiskAttitude innate, const ClassBoundaries& bounds) {
    AgentState s;
    s.id = id;
    s.wealth = wealth;
    s.alpha0 = innate;
    s.set_attitude(innate, bounds);
    return s;
}

void AgentState::set_attitude(RiskAttitude value, const ClassBoundaries& bounds) {
    alpha = value;
    cls = classify(value.value(), bounds);
}

AssetPool::AssetPool(std::vector<double> capacity) : capacity_(std::move(capacity)), remaining_(capacity_) {}

void AssetPool::take(std::size_t asset, double stake) {
    if (asset >= remaining_.size()) return;
    if (remaining_[asset] < stake) {
        throw std::logic_error("stake exceeds remaining availability of asset " + std::to_string(asset));
    }
    remaining_[asset] -= stake;
}

std::size_t choose_ranked(std::span<const std::size_t> ranking, double stake, const AssetPool& pool,
                          std::size_t virtual_asset) noexcept {
    if (!(stake > 0.0)) return virtual_asset;
    for (std::size_t asset : ranking) {
        if (pool.is_feasible(asset, stake)) return asset;
    }
    return virtual_asset;
}

std::size_t choose_asset(const AgentState& agent, const AssetPool& pool, double delta,
                         std::span<const AssetSpec> assets) {
    std::size_t virtual_asset = assets.size() - 1;
    for (std::size_t i = 0; i < assets.size(); ++i) {
        if (assets[i].is_virtual) virtual_asset = i;
    }
    const auto ranking = rank_assets(agent.alpha.value(), assets);
    return choose_ranked(ranking, delta * agent.wealth, pool, virtual_asset);
}

void MarketParams::validate() const {
    if (agents < 2) throw ConfigError("n", "need at least 2 agents");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
    if (!(initial_wealth > 0.0)) throw ConfigError("x0", "must be positive");
    if (!(availability_fraction > 0.0)) throw ConfigError("availability_fraction", "must be positive");
    if (assets.size() < 2 || !assets.back().is_virtual) {
        throw ConfigError("win_rates", "need at least one real asset followed by the no-investment asset");
    }
    for (std::size_t i = 0; i + 1 < assets.size(); ++i) {
        if (assets[i].is_virtual) throw ConfigError("win_rates", "only the last asset may be virtual");
        if (!(assets[i].win_rate > 1.0)) throw ConfigError("win_rates", "real win rates must exceed 1");
        if (!(assets[i].loss_rate > 0.0 && assets[i].loss_rate < 1.0)) {
            throw ConfigError("loss_rates", "real loss rates must lie in (0, 1)");
        }
    }
    if (assets.back().win_rate != 1.0 || assets.back().loss_rate != 1.0) {
        throw ConfigError("win_rates", "the no-investment asset has unit rates");
    }
    if (!(boundaries.ordinary > RiskAttitude::kMin && boundaries.ordinary < boundaries.audacious &&
          boundaries.audacious <= RiskAttitude::kMax)) {
        throw ConfigError("ordinary_threshold", "class thresholds must satisfy 0.5 < ordinary < audacious <= 1");
    }
}

}  // namespace wealthnet
