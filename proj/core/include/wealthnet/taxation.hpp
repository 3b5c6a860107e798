#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace wealthnet {

enum class TaxScheme { TobinLike, Flat };

/// Denominator of the Tobin-like profit fraction. `WinnersOnly` sums the
/// positive gains, which makes the levy equal the excess profit and keeps the
/// mean wealth constant. `AllGains` sums every agent's signed gain.
enum class TobinDenominator { WinnersOnly, AllGains };

struct TaxPolicy {
    TaxScheme scheme = TaxScheme::TobinLike;
    TobinDenominator denominator = TobinDenominator::WinnersOnly;
};

std::string_view to_string(TaxScheme scheme) noexcept;
std::string_view to_string(TobinDenominator d) noexcept;

struct TaxInputs {
    std::span<const double> pre_tax;   ///< after trading, before tax
    std::span<const double> previous;  ///< post-tax wealth of the previous session
    std::span<const double> initial;   ///< wealth at time zero
};

/// Levies the system profit above initial wealth on this session's winners,
/// proportionally to their gains. Losers and non-traders are untouched.
std::vector<double> tobin_tax(const TaxInputs& in, TobinDenominator denominator = TobinDenominator::WinnersOnly);

/// Rescales every wealth by sum(initial) / sum(pre_tax).
/// Throws DegenerateMarketError when the pre-tax total is not positive.
std::vector<double> flat_tax(const TaxInputs& in);

std::vector<double> apply_tax(const TaxPolicy& policy, const TaxInputs& in);

}  // namespace wealthnet
