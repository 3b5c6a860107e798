#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace wealthnet {

// Every random quantity in a replicate is addressed by a key derived from the
// replicate seed, a tag, and integer coordinates. Nothing depends on how many
// draws were made before, so two runs that diverge in their decisions still
// read identical values for identical keys.

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// FNV-1a over the tag bytes.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t derive_key(std::uint64_t seed, std::string_view tag,
                         std::initializer_list<std::uint64_t> coords = {}) noexcept;

/// Maps the top 53 bits onto [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based generator: the i-th output is a pure function of (key, i).
/// Satisfies UniformRandomBitGenerator.
class KeyedStream {
public:
    using result_type = std::uint64_t;

    explicit KeyedStream(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }

    result_type next() noexcept { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    double uniform() noexcept { return to_unit_interval(next()); }

    /// Unbiased integer in [0, bound). `bound` must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Fisher-Yates over `items`; platform independent, unlike std::shuffle.
template <typename T>
void shuffle(std::span<T> items, KeyedStream& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

std::vector<std::size_t> random_permutation(std::size_t n, KeyedStream& rng);

/// Trade outcomes addressed by (step, agent) rather than by draw order.
class BernoulliStream {
public:
    explicit BernoulliStream(std::uint64_t replicate_seed) noexcept
        : key_(derive_key(replicate_seed, "bernoulli")) {}

    /// 1 for a won trade, 0 for a lost one, each with probability 1/2.
    int outcome(std::uint64_t step, std::uint64_t agent) const noexcept {
        return static_cast<int>(mix64(mix64(key_ ^ mix64(step)) ^ agent) >> 63);
    }

private:
    std::uint64_t key_;
};

/// Named sub-streams of one replicate.
struct ReplicateSeeds {
    std::uint64_t replicate_seed = 0;

    static ReplicateSeeds for_replicate(std::uint64_t master_seed, std::uint64_t replicate) noexcept {
        return ReplicateSeeds{derive_key(master_seed, "replicate", {replicate})};
    }

    BernoulliStream bernoulli() const noexcept { return BernoulliStream(replicate_seed); }
    KeyedStream permutation(std::uint64_t step) const noexcept {
        return KeyedStream(derive_key(replicate_seed, "perm", {step}));
    }
    KeyedStream attitudes() const noexcept { return KeyedStream(derive_key(replicate_seed, "alpha0")); }
    KeyedStream partition() const noexcept { return KeyedStream(derive_key(replicate_seed, "partition")); }
    KeyedStream graph() const noexcept { return KeyedStream(derive_key(replicate_seed, "graph")); }
    KeyedStream rewiring() const noexcept { return KeyedStream(derive_key(replicate_seed, "rewire")); }
};

}  // namespace wealthnet
