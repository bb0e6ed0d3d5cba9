#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stochmem {

/// SplitMix64 output finalizer (Steele, Lea, Flood 2014). Public-domain mixing
/// function; named rather than delegated to <random> so streams are identical
/// across languages and standard libraries.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Sequential SplitMix64 generator. Single-owner: derive one per consumer.
class RandomSource {
public:
    constexpr explicit RandomSource(std::uint64_t state = 0) noexcept : state_(state) {}

    constexpr std::uint64_t next_u64() noexcept {
        state_ += kGoldenGamma;
        return splitmix64_mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal draw by Box-Muller (one draw per call, the sine branch is discarded).
    double next_gaussian() noexcept {
        // 1 - u keeps the log argument in (0, 1].
        const double u1 = 1.0 - next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Identifies one independent random stream in an experiment.
struct SeedSpec {
    std::uint64_t global_seed = 0;
    std::uint32_t pixel_x = 0;
    std::uint32_t pixel_y = 0;
    std::uint32_t stream_id = 0;

    friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Derives the initial generator state by chaining every SeedSpec field
/// through the SplitMix64 finalizer:
///   h = mix(global); h = mix(h ^ (x + g)); h = mix(h ^ (y + 2g)); h = mix(h ^ (id + 3g))
/// where g is the golden gamma. Each step is a bijection of h for a fixed field
/// value, so two specs differing in one field never collide.
constexpr std::uint64_t derive_seed(const SeedSpec& seed) noexcept {
    std::uint64_t h = splitmix64_mix(seed.global_seed);
    h = splitmix64_mix(h ^ (seed.pixel_x + kGoldenGamma));
    h = splitmix64_mix(h ^ (seed.pixel_y + 2 * kGoldenGamma));
    h = splitmix64_mix(h ^ (seed.stream_id + 3 * kGoldenGamma));
    return h;
}

constexpr RandomSource derive_generator(const SeedSpec& seed) noexcept {
    return RandomSource{derive_seed(seed)};
}

} // namespace stochmem
