#pragma once

#include "wealthnet/model.hpp"
#include "wealthnet/random.hpp"
#include "wealthnet/taxation.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wealthnet {

/// Fresh session availability: every real asset gets total_wealth times the
/// availability fraction. Throws DomainError for a negative total.
AssetPool reset_availability(double total_wealth, const MarketParams& params);

/// Wealth after one trade, before tax. `won` is the Bernoulli outcome.
double settle_trade(double previous_wealth, const AssetSpec& asset, int won, double delta) noexcept;

/// Outcome of one trading session. Per-agent vectors are indexed by agent id.
struct SessionRecord {
    std::uint64_t step = 0;
    std::vector<std::size_t> order;     ///< trading order
    std::vector<std::size_t> asset;     ///< chosen asset, virtual index for no trade
    std::vector<double> stake;          ///< amount placed in a real asset, 0 otherwise
    std::vector<std::uint8_t> outcome;  ///< Bernoulli draw for (step, agent)
    std::vector<double> previous;       ///< wealth entering the session
    std::vector<double> pre_tax;
    std::vector<double> post_tax;
    double volume = 0.0;                ///< sum of real-asset stakes
    AssetPool pool;                     ///< availability left after the last trade
};

/// Runs one session: availability reset, random trading order, sequential
/// choice and settlement, then a single tax pass over all agents. Agents'
/// wealth is updated in place to the post-tax values.
SessionRecord run_session(std::span<AgentState> agents, std::uint64_t step, const BernoulliStream& outcomes,
                          KeyedStream permutation, const MarketParams& params, const TaxPolicy& tax,
                          std::span<const double> initial_wealth);

/// A population plus cached asset rankings. Rankings only change when
/// attitudes do, so sessions avoid recomputing fractional powers.
class Market {
public:
    Market(MarketParams params, TaxPolicy tax, std::vector<AgentState> agents);

    SessionRecord run_session(std::uint64_t step, const ReplicateSeeds& seeds);

    /// Replaces current attitudes (not the innate ones) and refreshes classes.
    void set_attitudes(std::span<const double> alphas);

    const std::vector<AgentState>& agents() const noexcept { return agents_; }
    const MarketParams& params() const noexcept { return params_; }
    std::span<const double> initial_wealth() const noexcept { return initial_; }

    std::vector<double> wealths() const;
    std::vector<double> attitudes() const;
    std::vector<double> innate_attitudes() const;
    double total_wealth() const noexcept;

private:
    MarketParams params_;
    TaxPolicy tax_;
    std::vector<AgentState> agents_;
    std::vector<double> initial_;
    std::vector<std::vector<std::size_t>> rankings_;
};

}  // namespace wealthnet
