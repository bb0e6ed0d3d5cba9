#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stochmem/analog_memory.hpp"

using namespace stochmem;

TEST(AnalogMemory, ZeroNoiseRoundTripsExactly) {
    auto mem = MemoryInstance::analog(NoiseModel{0.0, 0.0});
    RandomSource rng(1);
    for (int i = 0; i < 100; ++i) {
        const double v = rng.next_unit();
        mem_write(mem, i, v, rng);
        EXPECT_EQ(mem_read(mem, i, rng), v);
    }
}

TEST(AnalogMemory, ClampKeepsValuesInUnitInterval) {
    auto mem = MemoryInstance::analog(NoiseModel{0.2, 0.2});
    RandomSource rng(5);
    for (int i = 0; i < 5000; ++i) {
        mem_write(mem, 0, 1.0, rng);
        const double r = mem_read(mem, 0, rng);
        ASSERT_LE(r, 1.0);
        ASSERT_GE(r, 0.0);
        mem_write(mem, 1, 0.0, rng);
        ASSERT_GE(mem_read(mem, 1, rng), 0.0);
    }
}

TEST(AnalogMemory, WriteNoiseMoments) {
    auto mem = MemoryInstance::analog(NoiseModel{0.01, 0.0});
    RandomSource rng(17);
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        mem_write(mem, 0, 0.5, rng);
        const double s = mem_read(mem, 0, rng);
        sum += s;
        sq += s * s;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    EXPECT_NEAR(mean, 0.5, 0.05 * 0.5);
    EXPECT_NEAR(sd, 0.01, 0.05 * 0.01);
}

TEST(AnalogMemory, ReadAfterWriteDiscrepancyIsFoldedNormal) {
    // Folded-normal mean: sigma_eff * sqrt(2/pi) with sigma_eff = 0.01 * sqrt(2) -> 0.011284.
    auto mem = MemoryInstance::analog(NoiseModel{0.01, 0.01});
    RandomSource rng(23);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        mem_write(mem, 0, 0.5, rng);
        sum += std::abs(mem_read(mem, 0, rng) - 0.5);
    }
    EXPECT_NEAR(sum / n, 0.011283791670955128, 0.05 * 0.011284);
}

TEST(AnalogMemory, ReadNoiseIndependentAcrossReads) {
    // Variance of the mean of N reads of one cell ~ read_sigma^2 / N.
    const double sigma = 0.02;
    const int reads = 8, trials = 10000;
    auto mem = MemoryInstance::analog(NoiseModel{0.0, sigma});
    RandomSource rng(31);
    mem_write(mem, 0, 0.5, rng);
    double sum = 0, sq = 0;
    for (int t = 0; t < trials; ++t) {
        double m = 0;
        for (int r = 0; r < reads; ++r) m += mem_read(mem, 0, rng);
        m /= reads;
        sum += m;
        sq += m * m;
    }
    const double var = sq / trials - (sum / trials) * (sum / trials);
    EXPECT_NEAR(var, sigma * sigma / reads, 0.1 * sigma * sigma / reads);
}

TEST(AnalogMemory, UnwrittenAddressAndDomainErrors) {
    auto mem = MemoryInstance::analog(NoiseModel{});
    RandomSource rng(1);
    EXPECT_THROW(mem_read(mem, 42, rng), DomainError);
    EXPECT_THROW(mem_write(mem, 0, 1.2, rng), DomainError);
    EXPECT_THROW(mem_write(mem, 0, -0.2, rng), DomainError);
    EXPECT_THROW(NoiseModel(-0.1, 0.0), ConfigError);
}

TEST(DigitalMemory, StoresTenBitWords) {
    auto mem = MemoryInstance::digital(10);
    RandomSource rng(2);
    mem_write(mem, 3, 0.3, rng);
    EXPECT_DOUBLE_EQ(mem_read(mem, 3, rng), 307.0 / 1023.0);
    mem_write(mem, 4, 511.0 / 1023.0, rng);
    EXPECT_DOUBLE_EQ(mem_read(mem, 4, rng), 511.0 / 1023.0);
}

TEST(DigitalMemory, IgnoresGeneratorEntirely) {
    auto mem = MemoryInstance::digital(10);
    RandomSource rng(2);
    const auto before = rng.state();
    mem_write(mem, 0, 0.7, rng);
    (void)mem_read(mem, 0, rng);
    EXPECT_EQ(rng.state(), before);
}

TEST(MemStats, CountsInvocations) {
    auto mem = MemoryInstance::analog(NoiseModel{0.01, 0.01});
    EXPECT_EQ(mem_stats(mem), (AccessStats{0, 0}));
    RandomSource rng(1);
    for (int i = 0; i < 3; ++i) mem_write(mem, i, 0.5, rng);
    for (int i = 0; i < 5; ++i) (void)mem_read(mem, i % 3, rng);
    EXPECT_EQ(mem_stats(mem), (AccessStats{5, 3}));
}

TEST(MemStats, FailedReadDoesNotCount) {
    auto mem = MemoryInstance::digital();
    RandomSource rng(1);
    EXPECT_THROW(mem_read(mem, 9, rng), DomainError);
    EXPECT_EQ(mem_stats(mem).reads, 0u);
}
