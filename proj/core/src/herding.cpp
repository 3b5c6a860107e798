#include "wealthnet/herding.hpp"

#include "wealthnet/errors.hpp"
#include "wealthnet/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace wealthnet {

void HerdingParams::validate() const {
    if (!(weight >= 0.0 && weight <= 1.0)) throw ConfigError("w", "must lie in [0, 1]");
    if (trigger_step < 1) throw ConfigError("kt", "must be at least 1");
}

void update_attitudes(std::span<const double> previous, std::span<const double> innate, const InAdjacency& in,
                      double weight, std::span<double> next) {
    const std::size_t n = previous.size();
    if (innate.size() != n || next.size() != n || in.offsets.size() != n + 1) {
        throw std::invalid_argument("attitude vectors and adjacency disagree on the node count");
    }
    if (next.data() == previous.data()) throw std::invalid_argument("update must not run in place");

    for (std::size_t j = 0; j < n; ++j) {
        const auto neighbours = in.of(j);
        if (neighbours.empty()) {
            next[j] = previous[j];
            continue;
        }
        double sum = 0.0;
        for (std::size_t h : neighbours) sum += previous[h];
        const double value = (1.0 - weight) * innate[j] + weight * sum / static_cast<double>(neighbours.size());
        // Convex combination; the clamp only absorbs last-bit rounding.
        next[j] = std::clamp(value, RiskAttitude::kMin, RiskAttitude::kMax);
    }
}

std::vector<double> update_attitudes(std::span<const double> previous, std::span<const double> innate,
                                     const InAdjacency& in, double weight) {
    std::vector<double> next(previous.size());
    update_attitudes(previous, innate, in, weight, next);
    return next;
}

}  // namespace wealthnet
