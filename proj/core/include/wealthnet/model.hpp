#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace wealthnet {

/// Exponent of an agent's power-law utility; lower means more risk averse.
/// Always within [0.5, 1].
class RiskAttitude {
public:
    static constexpr double kMin = 0.5;
    static constexpr double kMax = 1.0;

    /// Throws DomainError outside [0.5, 1].
    explicit RiskAttitude(double value);

    double value() const noexcept { return value_; }

    friend bool operator==(RiskAttitude, RiskAttitude) = default;

private:
    double value_;
};

enum class AgentClass : std::uint8_t { Prudent = 0, Ordinary = 1, Audacious = 2 };

inline constexpr std::size_t kClassCount = 3;

constexpr std::size_t class_index(AgentClass c) noexcept { return static_cast<std::size_t>(c); }
std::string_view to_string(AgentClass c) noexcept;

/// Lower edges of the ordinary and audacious ranges; each edge belongs to the
/// upper class.
struct ClassBoundaries {
    double ordinary = 0.67;
    double audacious = 0.83;
};

/// Throws DomainError for attitudes outside [0.5, 1].
AgentClass classify(double alpha, const ClassBoundaries& bounds = {});

struct AssetSpec {
    double win_rate = 1.0;
    double loss_rate = 1.0;
    bool is_virtual = false;

    static AssetSpec real(double win, double loss) noexcept { return {win, loss, false}; }
    static AssetSpec no_investment() noexcept { return {1.0, 1.0, true}; }
};

struct MarketParams {
    std::size_t agents = 1000;
    double delta = 0.2;
    double initial_wealth = 100.0;
    /// Real assets first, the no-investment asset last.
    std::vector<AssetSpec> assets = {
        AssetSpec::real(1.53, 0.6),
        AssetSpec::real(1.60, 0.5),
        AssetSpec::real(1.67, 0.4),
        AssetSpec::no_investment(),
    };
    double availability_fraction = 1.0 / 15.0;
    ClassBoundaries boundaries;

    std::size_t real_asset_count() const noexcept { return assets.empty() ? 0 : assets.size() - 1; }
    std::size_t virtual_asset() const noexcept { return assets.size() - 1; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// 0.5 (a^alpha + b^alpha): expected utility divided by the common factor
/// (delta * wealth)^alpha.
double utility_multiplier(double alpha, const AssetSpec& asset) noexcept;

/// 0.5 [(a delta w)^alpha + (b delta w)^alpha]. Throws DomainError when the
/// stake delta * wealth is not positive.
double expected_utility(double wealth, RiskAttitude alpha, double delta, const AssetSpec& asset);

/// Real assets an agent with this attitude strictly prefers to not investing,
/// best first. Equal multipliers keep the lower index first.
std::vector<std::size_t> rank_assets(double alpha, std::span<const AssetSpec> assets);

struct AgentState {
    std::size_t id = 0;
    double wealth = 0.0;
    RiskAttitude alpha0{1.0};
    RiskAttitude alpha{1.0};
    AgentClass cls = AgentClass::Audacious;

    static AgentState make(std::size_t id, double wealth, RiskAttitude innate, const ClassBoundaries& bounds);

    void set_attitude(RiskAttitude value, const ClassBoundaries& bounds);
};

/// Remaining per-session availability of the real assets. The no-investment
/// asset is not stored and is always feasible.
class AssetPool {
public:
    AssetPool() = default;
    explicit AssetPool(std::vector<double> capacity);

    std::size_t real_assets() const noexcept { return capacity_.size(); }
    double capacity(std::size_t asset) const { return capacity_.at(asset); }
    double remaining(std::size_t asset) const { return remaining_.at(asset); }

    bool is_feasible(std::size_t asset, double stake) const noexcept {
        return asset >= remaining_.size() || remaining_[asset] >= stake;
    }

    /// Removes a stake from a real asset; the no-investment index is a no-op.
    /// Throws std::logic_error if the stake does not fit.
    void take(std::size_t asset, double stake);

private:
    std::vector<double> capacity_;
    std::vector<double> remaining_;
};

/// Best feasible asset for the agent given what is left in the pool. Returns
/// the no-investment index when no feasible real asset beats it.
std::size_t choose_asset(const AgentState& agent, const AssetPool& pool, double delta,
                         std::span<const AssetSpec> assets);

/// Same decision from a precomputed `rank_assets` list.
std::size_t choose_ranked(std::span<const std::size_t> ranking, double stake, const AssetPool& pool,
                          std::size_t virtual_asset) noexcept;

}  // namespace wealthnet
