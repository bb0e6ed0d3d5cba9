#include <gtest/gtest.h>

#include <cmath>

#include "stochmem/converters.hpp"

using namespace stochmem;

namespace {

std::size_t naive_count(const Bitstream& bs) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < bs.length(); ++i) n += bs.get_bit(i);
    return n;
}

} // namespace

TEST(Adc, Examples) {
    EXPECT_EQ(adc_quantize(1.0, {10}), 1023u);
    EXPECT_EQ(adc_quantize(0.0, {10}), 0u);
    EXPECT_EQ(adc_quantize(0.3, {10}), 307u);
    EXPECT_NEAR(dac_dequantize(307, {10}), 0.300098, 1e-6);
}

TEST(Adc, RoundsHalfUp) {
    // 0.5 * 1023 = 511.5 -> 512
    EXPECT_EQ(adc_quantize(0.5, {10}), 512u);
    EXPECT_EQ(adc_quantize(0.5, {1}), 1u);
}

TEST(Adc, DomainErrors) {
    EXPECT_THROW(adc_quantize(-0.01, {10}), DomainError);
    EXPECT_THROW(adc_quantize(1.01, {10}), DomainError);
    EXPECT_THROW(adc_quantize(std::nan(""), {10}), DomainError);
    EXPECT_THROW(adc_quantize(0.5, {0}), DomainError);
    EXPECT_THROW(adc_quantize(0.5, {17}), DomainError);
}

TEST(Dac, Examples) {
    EXPECT_DOUBLE_EQ(dac_dequantize(255, {8}), 1.0);
    EXPECT_DOUBLE_EQ(dac_dequantize(0, {8}), 0.0);
    EXPECT_NEAR(dac_dequantize(128, {8}), 0.50196, 1e-5);
    EXPECT_THROW(dac_dequantize(256, {8}), DomainError);
}

TEST(Quantizer, DequantizeThenQuantizeIsIdentityOnCodes) {
    for (unsigned bits : {1u, 8u, 10u, 16u}) {
        const QuantizerConfig cfg{bits};
        for (std::uint32_t code = 0; code <= cfg.max_code(); code += (bits == 16 ? 97 : 1))
            ASSERT_EQ(adc_quantize(dac_dequantize(code, cfg), cfg), code);
    }
}

TEST(Quantizer, QuantizeThenDequantizeErrorBounded) {
    RandomSource rng(3);
    for (unsigned bits : {8u, 10u}) {
        const QuantizerConfig cfg{bits};
        const double bound = 1.0 / (2.0 * cfg.max_code()) + 1e-12;
        for (int i = 0; i < 20000; ++i) {
            const double x = rng.next_unit();
            ASSERT_LE(std::abs(dac_dequantize(adc_quantize(x, cfg), cfg) - x), bound);
        }
    }
}

TEST(Dsc, SaturatedAndEmptyCodes) {
    LfsrState a(default_lfsr_spec(), 5);
    EXPECT_EQ(sdc_count(dsc_generate(1023, 777, a)), 777u);
    LfsrState b(default_lfsr_spec(), 5);
    EXPECT_EQ(sdc_count(dsc_generate(0, 777, b)), 0u);
}

TEST(Dsc, FullPeriodOnesEqualCodeForEveryCode) {
    const auto& seq = default_lfsr_sequence();
    for (std::uint32_t code = 0; code <= 1023; ++code) {
        const auto bs = dsc_generate(code, 1023, seq, (code * 37) % 1023);
        ASSERT_EQ(sdc_count(bs), code);
        ASSERT_DOUBLE_EQ(sac_integrate(bs), code / 1023.0);
    }
}

TEST(Dsc, Code512OverFullPeriodGives512Ones) {
    // Oracle: 512 of the 1023 distinct states {1..1023} are <= 512.
    LfsrState s(default_lfsr_spec(), 1);
    EXPECT_EQ(sdc_count(dsc_generate(512, 1023, s)), 512u);
    EXPECT_EQ(s.value(), 1u); // register advanced one full period
}

TEST(Dsc, TableAndSteppingPathsAgree) {
    const auto& seq = default_lfsr_sequence();
    for (std::uint32_t seed : {1u, 300u, 1023u}) {
        LfsrState st(default_lfsr_spec(), seed);
        EXPECT_EQ(dsc_generate(600, 2500, st), dsc_generate(600, 2500, seq, seq.position_of(seed)));
    }
}

TEST(Dsc, CodeOutOfRange) {
    LfsrState s(default_lfsr_spec(), 1);
    EXPECT_THROW(dsc_generate(1024, 10, s), DomainError);
}

TEST(Sdc, Examples) {
    Bitstream ones(1024);
    for (std::size_t i = 0; i < 1024; ++i) ones.set_bit(i, true);
    EXPECT_EQ(sdc_count(ones), 1024u);
    Bitstream alt(10);
    for (std::size_t i = 1; i < 10; i += 2) alt.set_bit(i, true);
    EXPECT_EQ(sdc_count(alt), 5u);
}

TEST(Sdc, MatchesBitByBitLoop) {
    RandomSource rng(99);
    for (int t = 0; t < 1000; ++t) {
        const auto bs = asc_generate(rng.next_unit(), 1 + rng.next_u64() % 700, rng);
        ASSERT_EQ(sdc_count(bs), naive_count(bs));
    }
}

TEST(Asc, SaturatedProbabilities) {
    RandomSource rng(1);
    EXPECT_EQ(sdc_count(asc_generate(1.0, 1000, rng)), 1000u);
    EXPECT_EQ(sdc_count(asc_generate(0.0, 1000, rng)), 0u);
    EXPECT_THROW(asc_generate(1.5, 10, rng), DomainError);
    EXPECT_THROW(asc_generate(-0.1, 10, rng), DomainError);
}

TEST(Asc, BinomialMeanAndStd) {
    // Binomial(1024, 0.3): mean 307.2, std sqrt(1024 * 0.3 * 0.7) = 14.66.
    RandomSource rng(2024);
    const int trials = 1000;
    double sum = 0, sq = 0;
    for (int t = 0; t < trials; ++t) {
        const double k = static_cast<double>(sdc_count(asc_generate(0.3, 1024, rng)));
        sum += k;
        sq += k * k;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sq - trials * mean * mean) / (trials - 1));
    EXPECT_NEAR(mean, 307.2, 0.05 * 307.2);
    EXPECT_NEAR(sd, std::sqrt(1024 * 0.3 * 0.7), 0.05 * 14.66);
}

TEST(Asc, UnbiasedWithinFourSigma) {
    for (double p : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        RandomSource rng(static_cast<std::uint64_t>(p * 1000));
        const int n = 400;
        const std::size_t len = 512;
        double sum = 0;
        for (int t = 0; t < n; ++t) sum += estimate_value(asc_generate(p, len, rng));
        EXPECT_LE(std::abs(sum / n - p), 4.0 * std::sqrt(p * (1 - p) / (n * len))) << p;
    }
}

TEST(Asc, SharedUniformsMatchDirectGeneration) {
    const RandomSource src(555);
    SharedUniforms shared(900, src);
    RandomSource direct = src;
    EXPECT_EQ(shared.generate(0.42), asc_generate(0.42, 900, direct));
}

TEST(Asc, SharedUniformsAreNested) {
    // A common threshold sequence makes the lower-probability stream a subset.
    SharedUniforms shared(2048, RandomSource(8));
    const auto lo = shared.generate(0.3);
    const auto hi = shared.generate(0.6);
    for (std::size_t i = 0; i < lo.length(); ++i)
        if (lo.get_bit(i)) ASSERT_TRUE(hi.get_bit(i));
}

TEST(Sac, Examples) {
    Bitstream all(64);
    for (std::size_t i = 0; i < 64; ++i) all.set_bit(i, true);
    EXPECT_DOUBLE_EQ(sac_integrate(all), 1.0);
    Bitstream half(1024);
    for (std::size_t i = 0; i < 512; ++i) half.set_bit(i, true);
    EXPECT_DOUBLE_EQ(sac_integrate(half), 0.5);
}
