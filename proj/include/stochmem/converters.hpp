#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stochmem/bitstream.hpp"
#include "stochmem/error.hpp"
#include "stochmem/lfsr.hpp"
#include "stochmem/random.hpp"

namespace stochmem {

struct QuantizerConfig {
    unsigned bits = 10;

    std::uint32_t max_code() const {
        if (bits < 1 || bits > 16) throw DomainError("quantizer bits must be in [1, 16]");
        return (std::uint32_t{1} << bits) - 1;
    }
};

inline constexpr QuantizerConfig kAdcConfig{10};
inline constexpr QuantizerConfig kDacConfig{8};

inline void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

/// round-half-up of x * (2^bits - 1)
inline std::uint32_t adc_quantize(double x, QuantizerConfig cfg = kAdcConfig) {
    check_unit_interval(x, "ADC input");
    const auto full = cfg.max_code();
    return static_cast<std::uint32_t>(std::floor(x * full + 0.5));
}

inline double dac_dequantize(std::uint32_t code, QuantizerConfig cfg = kDacConfig) {
    const auto full = cfg.max_code();
    if (code > full) throw DomainError("DAC code out of range");
    return static_cast<double>(code) / full;
}

namespace detail {

template <class BitFn>
Bitstream pack_bits(std::size_t length, BitFn&& bit_at) {
    Bitstream bs(length);
    auto words = bs.mutable_words();
    std::size_t i = 0;
    for (auto& w : words) {
        std::uint64_t acc = 0;
        const std::size_t n = std::min<std::size_t>(Bitstream::kWordBits, length - i);
        for (std::size_t b = 0; b < n; ++b, ++i)
            acc |= static_cast<std::uint64_t>(bit_at(i) ? 1U : 0U) << b;
        w = acc;
    }
    return bs;
}

} // namespace detail

/// LFSR + comparator DSC. Bit i is 1 iff the i-th LFSR output is <= code, so
/// code = 2^width - 1 saturates and code = 0 yields all zeros. The register is
/// advanced in place.
inline Bitstream dsc_generate(std::uint32_t code, std::size_t length, LfsrState& lfsr) {
    if (code > lfsr.spec().state_mask()) throw DomainError("DSC code out of range");
    return detail::pack_bits(length, [&](std::size_t) {
        auto [value, next] = lfsr_next(lfsr);
        lfsr = next;
        return value <= code;
    });
}

/// Same comparator contract, reading the LFSR from an unrolled period starting
/// at table position `start`. Equivalent to dsc_generate from state_at(start).
inline Bitstream dsc_generate(std::uint32_t code, std::size_t length, const LfsrSequence& seq,
                              std::uint32_t start) {
    if (code > seq.spec().state_mask()) throw DomainError("DSC code out of range");
    const std::uint32_t period = seq.period();
    std::uint32_t pos = start % period;
    return detail::pack_bits(length, [&](std::size_t) {
        const bool bit = seq.state_at(pos) <= code;
        if (++pos == period) pos = 0;
        return bit;
    });
}

inline std::size_t sdc_count(const Bitstream& bs) { return bs.ones_count(); }

/// Comparison threshold against a 32-bit uniform: bit = u < threshold.
inline std::uint64_t bernoulli_threshold(double p) {
    check_unit_interval(p, "ASC probability");
    return static_cast<std::uint64_t>(std::llround(p * 4294967296.0));
}

/// Behavioral MTJ ASC: independent Bernoulli(p) bits. Each bit consumes one
/// 64-bit draw whose upper 32 bits are compared against the threshold.
inline Bitstream asc_generate(double p, std::size_t length, RandomSource& rng) {
    const auto threshold = bernoulli_threshold(p);
    return detail::pack_bits(length, [&](std::size_t) { return (rng.next_u64() >> 32) < threshold; });
}

/// A block of uniform draws shared by several ASCs. Streams produced from the
/// same block are maximally correlated (the bits threshold a common sequence),
/// and each stream equals what asc_generate would produce from the same source.
class SharedUniforms {
public:
    SharedUniforms(std::size_t length, RandomSource rng) : draws_(length) {
        for (auto& d : draws_) d = static_cast<std::uint32_t>(rng.next_u64() >> 32);
    }

    std::size_t length() const noexcept { return draws_.size(); }

    Bitstream generate(double p) const {
        const auto threshold = bernoulli_threshold(p);
        return detail::pack_bits(draws_.size(), [&](std::size_t i) { return draws_[i] < threshold; });
    }

private:
    std::vector<std::uint32_t> draws_;
};

/// Integrator SAC: the fraction of cycles spent at logic 1.
inline double sac_integrate(const Bitstream& bs) {
    return static_cast<double>(bs.ones_count()) / static_cast<double>(bs.length());
}

} // namespace stochmem
