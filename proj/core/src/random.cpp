#include "wealthnet/random.hpp"

#include <numeric>

namespace wealthnet {

std::uint64_t derive_key(std::uint64_t seed, std::string_view tag,
                         std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t h = mix64(seed ^ tag_hash(tag));
    for (std::uint64_t c : coords) {
        h = mix64(h ^ mix64(c));
    }
    return h;
}

namespace {
__extension__ using uint128 = unsigned __int128;
}

std::uint64_t KeyedStream::below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection of the biased low band.
    std::uint64_t x = next();
    auto m = static_cast<uint128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next();
            m = static_cast<uint128>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::size_t> random_permutation(std::size_t n, KeyedStream& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(order), rng);
    return order;
}

}  // namespace wealthnet
