#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "stochmem/error.hpp"

namespace stochmem {

enum class Encoding { Unipolar, Bipolar };

/// Packed stochastic bitstream. Bit i lives in words[i / 64] at bit position
/// i % 64 (bit 0 is the LSB of word 0). Bits past `length` are always zero.
class Bitstream {
public:
    static constexpr std::size_t kMaxLength = std::size_t{1} << 24;
    static constexpr std::size_t kWordBits = 64;

    explicit Bitstream(std::size_t length, Encoding encoding = Encoding::Unipolar)
        : length_(checked_length(length)), encoding_(encoding), words_(word_count(length), 0) {}

    /// Takes ownership of packed words; stray bits past `length` are cleared.
    Bitstream(std::vector<std::uint64_t> words, std::size_t length,
              Encoding encoding = Encoding::Unipolar)
        : length_(checked_length(length)), encoding_(encoding), words_(std::move(words)) {
        if (words_.size() != word_count(length_))
            throw DomainError("bitstream word count does not match length");
        clear_tail();
    }

    static constexpr std::size_t word_count(std::size_t length) noexcept {
        return (length + kWordBits - 1) / kWordBits;
    }

    std::size_t length() const noexcept { return length_; }
    Encoding encoding() const noexcept { return encoding_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> mutable_words() noexcept { return words_; }

    bool get_bit(std::size_t i) const {
        check_index(i);
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
    }

    void set_bit(std::size_t i, bool value) {
        check_index(i);
        const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
        if (value)
            words_[i / kWordBits] |= mask;
        else
            words_[i / kWordBits] &= ~mask;
    }

    std::size_t ones_count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    /// Re-establishes the zero-tail invariant after raw word manipulation.
    void clear_tail() noexcept {
        const std::size_t rem = length_ % kWordBits;
        if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
    }

    friend bool operator==(const Bitstream&, const Bitstream&) = default;

private:
    static std::size_t checked_length(std::size_t length) {
        if (length == 0 || length > kMaxLength)
            throw DomainError("bitstream length must be in [1, 2^24]");
        return length;
    }

    void check_index(std::size_t i) const {
        if (i >= length_) throw DomainError("bit index out of range");
    }

    std::size_t length_;
    Encoding encoding_;
    std::vector<std::uint64_t> words_;
};

/// Decodes the represented value: ones/length (unipolar) or 2*ones/length - 1 (bipolar).
inline double estimate_value(const Bitstream& bs) {
    const double p = static_cast<double>(bs.ones_count()) / static_cast<double>(bs.length());
    return bs.encoding() == Encoding::Unipolar ? p : 2.0 * p - 1.0;
}

// Debug serialization: u64 length, u8 encoding, then the raw words, all little-endian.
inline void write_bitstream(std::ostream& os, const Bitstream& bs) {
    auto put_u64 = [&os](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xFF));
    };
    put_u64(bs.length());
    os.put(static_cast<char>(bs.encoding() == Encoding::Unipolar ? 0 : 1));
    for (auto w : bs.words()) put_u64(w);
}

inline Bitstream read_bitstream(std::istream& is) {
    auto get_u64 = [&is]() {
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) {
            const int c = is.get();
            if (c == std::char_traits<char>::eof()) throw ParseError("truncated bitstream");
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
        }
        return v;
    };
    const std::uint64_t length = get_u64();
    const int enc = is.get();
    if (enc != 0 && enc != 1) throw ParseError("bad bitstream encoding byte");
    if (length == 0 || length > Bitstream::kMaxLength) throw ParseError("bad bitstream length");
    std::vector<std::uint64_t> words(Bitstream::word_count(length));
    for (auto& w : words) w = get_u64();
    return Bitstream(std::move(words), length, enc == 0 ? Encoding::Unipolar : Encoding::Bipolar);
}

} // namespace stochmem
