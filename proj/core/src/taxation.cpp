#include "wealthnet/taxation.hpp"

#include "wealthnet/errors.hpp"

#include <stdexcept>
#include <string>

namespace wealthnet {

namespace {

void check_lengths(const TaxInputs& in) {
    if (in.pre_tax.empty() || in.pre_tax.size() != in.previous.size() || in.pre_tax.size() != in.initial.size()) {
        throw std::invalid_argument("tax inputs must be non-empty vectors of equal length");
    }
}

}  // namespace

std::string_view to_string(TaxScheme scheme) noexcept {
    return scheme == TaxScheme::TobinLike ? "tobin" : "flat";
}

std::string_view to_string(TobinDenominator d) noexcept {
    return d == TobinDenominator::WinnersOnly ? "winners" : "literal";
}

std::vector<double> tobin_tax(const TaxInputs& in, TobinDenominator denominator) {
    check_lengths(in);
    const std::size_t n = in.pre_tax.size();

    double profit = 0.0;
    double winners_gain = 0.0;
    double net_gain = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double gain = in.pre_tax[j] - in.previous[j];
        profit += in.pre_tax[j] - in.initial[j];
        net_gain += gain;
        if (gain > 0.0) winners_gain += gain;
    }

    std::vector<double> out(in.pre_tax.begin(), in.pre_tax.end());
    if (!(profit > 0.0)) return out;

    const double base = denominator == TobinDenominator::WinnersOnly ? winners_gain : net_gain;
    if (!(base > 0.0)) {
        // Positive profit over the initial total implies somebody gained this session.
        throw std::logic_error("tobin tax: profit " + std::to_string(profit) + " with non-positive gain base");
    }
    const double fraction = profit / base;
    for (std::size_t j = 0; j < n; ++j) {
        const double gain = in.pre_tax[j] - in.previous[j];
        if (gain > 0.0) out[j] = in.pre_tax[j] - gain * fraction;
    }
    return out;
}

std::vector<double> flat_tax(const TaxInputs& in) {
    check_lengths(in);
    double pre_total = 0.0;
    double initial_total = 0.0;
    for (std::size_t j = 0; j < in.pre_tax.size(); ++j) {
        pre_total += in.pre_tax[j];
        initial_total += in.initial[j];
    }
    if (!(pre_total > 0.0)) {
        throw DegenerateMarketError("flat tax: total pre-tax wealth is " + std::to_string(pre_total));
    }
    const double ratio = initial_total / pre_total;
    std::vector<double> out(in.pre_tax.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = ratio * in.pre_tax[j];
    return out;
}

std::vector<double> apply_tax(const TaxPolicy& policy, const TaxInputs& in) {
    return policy.scheme == TaxScheme::TobinLike ? tobin_tax(in, policy.denominator) : flat_tax(in);
}

}  // namespace wealthnet
