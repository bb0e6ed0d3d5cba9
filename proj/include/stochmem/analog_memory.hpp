#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "stochmem/converters.hpp"
#include "stochmem/error.hpp"
#include "stochmem/random.hpp"

namespace stochmem {

/// Read/write discrepancy of an analog cell, in full-scale units. Values are
/// perturbed by zero-mean Gaussian noise and clamped to [0, 1] at each access.
struct NoiseModel {
    double write_sigma = 0.0;
    double read_sigma = 0.0;

    NoiseModel() = default;
    NoiseModel(double write, double read) : write_sigma(write), read_sigma(read) {
        if (!(write >= 0.0) || !(read >= 0.0)) throw ConfigError("noise sigmas must be >= 0");
    }

    static NoiseModel symmetric(double sigma) { return {sigma, sigma}; }
};

struct AccessStats {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;

    AccessStats& operator+=(const AccessStats& o) noexcept {
        reads += o.reads;
        writes += o.writes;
        return *this;
    }
    friend bool operator==(const AccessStats&, const AccessStats&) = default;
};

enum class MemoryKind { DigitalIdeal, AnalogNoisy };

class MemoryInstance {
public:
    static MemoryInstance digital(unsigned word_bits = 10) {
        MemoryInstance m(MemoryKind::DigitalIdeal);
        m.word_ = QuantizerConfig{word_bits};
        m.word_.max_code();
        return m;
    }

    static MemoryInstance analog(NoiseModel noise) {
        MemoryInstance m(MemoryKind::AnalogNoisy);
        m.noise_ = noise;
        return m;
    }

    MemoryKind kind() const noexcept { return kind_; }
    const NoiseModel& noise() const noexcept { return noise_; }
    unsigned word_bits() const noexcept { return word_.bits; }

    void reserve(std::size_t cells) { cells_.reserve(cells); }

    /// Stores v. Digital memory quantizes to its word width; analog memory adds
    /// write noise drawn from `rng` (no draw is taken when write_sigma is 0).
    void write(std::uint64_t addr, double v, RandomSource& rng) {
        check_unit_interval(v, "memory write value");
        double stored = v;
        if (kind_ == MemoryKind::DigitalIdeal) {
            stored = static_cast<double>(adc_quantize(v, word_)) / word_.max_code();
        } else if (noise_.write_sigma > 0.0) {
            stored = std::clamp(v + noise_.write_sigma * rng.next_gaussian(), 0.0, 1.0);
        }
        cells_[addr] = stored;
        ++stats_.writes;
    }

    double read(std::uint64_t addr, RandomSource& rng) {
        const auto it = cells_.find(addr);
        if (it == cells_.end()) throw DomainError("read of unwritten memory address");
        ++stats_.reads;
        if (kind_ == MemoryKind::AnalogNoisy && noise_.read_sigma > 0.0)
            return std::clamp(it->second + noise_.read_sigma * rng.next_gaussian(), 0.0, 1.0);
        return it->second;
    }

    AccessStats stats() const noexcept { return stats_; }

private:
    explicit MemoryInstance(MemoryKind kind) : kind_(kind) {}

    MemoryKind kind_;
    QuantizerConfig word_{10};
    NoiseModel noise_{};
    std::unordered_map<std::uint64_t, double> cells_;
    AccessStats stats_{};
};

inline void mem_write(MemoryInstance& mem, std::uint64_t addr, double v, RandomSource& rng) {
    mem.write(addr, v, rng);
}

inline double mem_read(MemoryInstance& mem, std::uint64_t addr, RandomSource& rng) {
    return mem.read(addr, rng);
}

inline AccessStats mem_stats(const MemoryInstance& mem) { return mem.stats(); }

} // namespace stochmem
