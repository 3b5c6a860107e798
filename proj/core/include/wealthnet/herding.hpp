#pragma once

#include "wealthnet/network.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wealthnet {

struct HerdingParams {
    double weight = 0.5;             ///< w: 0 keeps innate attitudes, 1 copies neighbours
    std::uint64_t trigger_step = 50; ///< k_t: communities form at the end of this step

    void validate() const;
};

/// One synchronous emulation step:
///   alpha_j <- (1 - w) alpha0_j + w * mean of alpha over j's in-neighbours,
/// reading only `previous`. Nodes without in-neighbours keep their value.
void update_attitudes(std::span<const double> previous, std::span<const double> innate, const InAdjacency& in,
                      double weight, std::span<double> next);

std::vector<double> update_attitudes(std::span<const double> previous, std::span<const double> innate,
                                     const InAdjacency& in, double weight);

}  // namespace wealthnet
