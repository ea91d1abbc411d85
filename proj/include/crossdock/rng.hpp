/**
 * @file rng.hpp
 * @brief Keyed, counter-based uniform streams for common random numbers.
 *
 * Every source of model randomness in every replication gets its own stream.
 * A stream is addressed by (master seed, source, replication) and is backed by
 * Philox4x32-10: the master seed is the 64-bit Philox key, and the 128-bit
 * counter holds (block index, source tag, replication index). Distinct keys
 * therefore never share a counter value, and each stream has 2^64 blocks of
 * two uniforms each.
 */
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace crossdock {

/// Sources of randomness in the crossdock model. `shared` is the single
/// stream used when the model runs without dedicated streams.
enum class SourceId : std::uint32_t {
    arrival = 0,
    order_type = 1,
    point_choice = 2,
    manual_service_point_A = 3,
    manual_service_point_B = 4,
    auto_service_point_A = 5,
    auto_service_point_B = 6,
    shared = 7,
};

inline constexpr std::array<SourceId, 7> kDedicatedSources = {
    SourceId::arrival,
    SourceId::order_type,
    SourceId::point_choice,
    SourceId::manual_service_point_A,
    SourceId::manual_service_point_B,
    SourceId::auto_service_point_A,
    SourceId::auto_service_point_B,
};

constexpr std::string_view to_string(SourceId id) {
    switch (id) {
        case SourceId::arrival: return "arrival";
        case SourceId::order_type: return "order_type";
        case SourceId::point_choice: return "point_choice";
        case SourceId::manual_service_point_A: return "manual_service_point_A";
        case SourceId::manual_service_point_B: return "manual_service_point_B";
        case SourceId::auto_service_point_A: return "auto_service_point_A";
        case SourceId::auto_service_point_B: return "auto_service_point_B";
        case SourceId::shared: return "shared";
    }
    return "unknown";
}

struct StreamKey {
    std::uint64_t master_seed = 0;
    SourceId source = SourceId::arrival;
    std::uint32_t replication = 0;

    friend constexpr bool operator==(const StreamKey&, const StreamKey&) = default;
};

namespace detail {

/// Philox4x32-10 block function (Salmon et al., Random123).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// SplitMix64 finalizer; used to derive independent master seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Derive a new master seed from a seed and a salt. Used to move a whole
/// experiment onto a disjoint key space (independent sampling).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(salt + 0x632BE59BD9B4E019ull));
}

/// Deterministic uniform source. Single-owner; copy it to fork the state.
class RandomStream {
public:
    explicit RandomStream(StreamKey key) : key_(key) {}

    RandomStream(std::uint64_t master_seed, SourceId source, std::uint32_t replication)
        : RandomStream(StreamKey{master_seed, source, replication}) {}

    /// Next uniform in [0, 1) with 53 random bits.
    double next_uniform() {
        if (draws_ % 2 == 0) refill(draws_ / 2);
        const std::size_t slot = static_cast<std::size_t>(draws_ % 2) * 2;
        const std::uint64_t bits = (std::uint64_t{block_[slot]} << 32) | block_[slot + 1];
        ++draws_;
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    const StreamKey& key() const noexcept { return key_; }
    std::uint64_t draws_taken() const noexcept { return draws_; }

private:
    void refill(std::uint64_t block) {
        const detail::Philox4x32::Counter ctr = {
            static_cast<std::uint32_t>(block),
            static_cast<std::uint32_t>(block >> 32),
            static_cast<std::uint32_t>(key_.source),
            key_.replication,
        };
        const detail::Philox4x32::Key k = {
            static_cast<std::uint32_t>(key_.master_seed),
            static_cast<std::uint32_t>(key_.master_seed >> 32),
        };
        block_ = detail::Philox4x32::apply(ctr, k);
    }

    StreamKey key_;
    std::uint64_t draws_ = 0;
    detail::Philox4x32::Counter block_{};
};

inline RandomStream stream_create(std::uint64_t master_seed, SourceId source,
                                  std::uint32_t replication) {
    return RandomStream(master_seed, source, replication);
}

}  // namespace crossdock
