#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "stochmem/error.hpp"

namespace stochmem {

/// Fibonacci LFSR polynomial. Tap t (1-based) feeds bit t-1 of the state into
/// the feedback XOR; the register shifts left and the feedback enters at bit 0.
/// Taps {10, 7} is x^10 + x^7 + 1.
class LfsrSpec {
public:
    static constexpr unsigned kMinWidth = 2;
    static constexpr unsigned kMaxWidth = 16;

    LfsrSpec() : LfsrSpec(10, {10, 7}) {}

    LfsrSpec(unsigned width, std::initializer_list<unsigned> taps)
        : LfsrSpec(width, std::vector<unsigned>(taps)) {}

    LfsrSpec(unsigned width, const std::vector<unsigned>& taps) : width_(width) {
        if (width < kMinWidth || width > kMaxWidth)
            throw ConfigError("LFSR width must be in [2, 16]");
        if (taps.empty()) throw ConfigError("LFSR needs at least one tap");
        for (unsigned t : taps) {
            if (t < 1 || t > width) throw ConfigError("LFSR tap out of range");
            tap_mask_ |= std::uint32_t{1} << (t - 1);
        }
        if (!(tap_mask_ >> (width - 1) & 1U))
            throw ConfigError("LFSR taps must include the register width");
        if (simulated_period() != period())
            throw ConfigError("LFSR taps are not maximal-length for width " + std::to_string(width));
    }

    unsigned width() const noexcept { return width_; }
    std::uint32_t tap_mask() const noexcept { return tap_mask_; }
    std::uint32_t state_mask() const noexcept { return (std::uint32_t{1} << width_) - 1; }
    std::uint32_t period() const noexcept { return state_mask(); }

    std::uint32_t step(std::uint32_t state) const noexcept {
        const auto fb = static_cast<std::uint32_t>(std::popcount(state & tap_mask_) & 1);
        return ((state << 1) | fb) & state_mask();
    }

    friend bool operator==(const LfsrSpec&, const LfsrSpec&) = default;

private:
    std::uint32_t simulated_period() const {
        std::uint32_t s = 1;
        std::uint32_t n = 0;
        do {
            s = step(s);
            ++n;
        } while (s != 1 && n <= state_mask());
        return n;
    }

    unsigned width_;
    std::uint32_t tap_mask_ = 0;
};

inline const LfsrSpec& default_lfsr_spec() {
    static const LfsrSpec spec;
    return spec;
}

class LfsrState {
public:
    LfsrState(LfsrSpec spec, std::uint32_t state) : spec_(std::move(spec)), state_(state) {
        if (state_ == 0) throw ConfigError("LFSR state must be nonzero (all-zero lockup)");
        if (state_ > spec_.state_mask()) throw ConfigError("LFSR state wider than register");
    }

    const LfsrSpec& spec() const noexcept { return spec_; }
    std::uint32_t value() const noexcept { return state_; }

    friend bool operator==(const LfsrState&, const LfsrState&) = default;

private:
    friend std::pair<std::uint32_t, LfsrState> lfsr_next(const LfsrState& s);
    struct Unchecked {};
    LfsrState(Unchecked, LfsrSpec spec, std::uint32_t state) : spec_(std::move(spec)), state_(state) {}

    LfsrSpec spec_;
    std::uint32_t state_;
};

/// Emits the current register contents, then advances one step.
inline std::pair<std::uint32_t, LfsrState> lfsr_next(const LfsrState& s) {
    return {s.state_, LfsrState(LfsrState::Unchecked{}, s.spec_, s.spec_.step(s.state_))};
}

/// One full period of an LFSR unrolled into a table, so a stream starting at
/// any state can be read by offset instead of stepping the register.
class LfsrSequence {
public:
    explicit LfsrSequence(const LfsrSpec& spec) : spec_(spec) {
        const std::uint32_t n = spec.period();
        states_.resize(n);
        position_.assign(std::size_t{n} + 1, 0);
        std::uint32_t s = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            states_[i] = s;
            position_[s] = i;
            s = spec.step(s);
        }
    }

    const LfsrSpec& spec() const noexcept { return spec_; }
    std::uint32_t period() const noexcept { return static_cast<std::uint32_t>(states_.size()); }
    std::uint32_t position_of(std::uint32_t state) const { return position_.at(state); }
    std::uint32_t state_at(std::size_t pos) const noexcept { return states_[pos % states_.size()]; }

private:
    LfsrSpec spec_;
    std::vector<std::uint32_t> states_;
    std::vector<std::uint32_t> position_;
};

inline const LfsrSequence& default_lfsr_sequence() {
    static const LfsrSequence seq(default_lfsr_spec());
    return seq;
}

/// Maps an arbitrary 64-bit draw onto a valid (nonzero) register state.
inline std::uint32_t lfsr_seed_from(std::uint64_t draw, const LfsrSpec& spec) noexcept {
    return static_cast<std::uint32_t>(draw % spec.period()) + 1;
}

} // namespace stochmem
