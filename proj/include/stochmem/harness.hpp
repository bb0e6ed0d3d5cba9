#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stochmem/analog_memory.hpp"
#include "stochmem/bernstein.hpp"
#include "stochmem/bitstream.hpp"
#include "stochmem/circuits.hpp"
#include "stochmem/converters.hpp"
#include "stochmem/cost_model.hpp"
#include "stochmem/image.hpp"
#include "stochmem/lfsr.hpp"
#include "stochmem/random.hpp"

namespace stochmem {

enum class LfsrMode {
    PerPixel,    // fresh register state per (pixel, generator)
    FreeRunning, // one register per (row, generator), running on across the row
};

/// Calibrated by calibrate_noise() against a 0.19 pp StochMem-vs-ConvMtj gap at
/// L = 1024 on the default synthetic inputs (see README).
inline constexpr double kDefaultMemorySigma = 0.0039;

struct ExperimentConfig {
    AppKind app = AppKind::Robert;
    SystemDesign design = SystemDesign::ConvLfsr;
    std::size_t length = 1024;
    std::uint64_t global_seed = 1;
    NoiseModel noise = NoiseModel::symmetric(kDefaultMemorySigma);
    double frame_theta = 0.1;
    KdeParams kde{};
    double gamma_exponent = 0.45;
    unsigned gamma_degree = 6;
    LfsrMode lfsr_mode = LfsrMode::PerPixel;
    AccessProfile access = AccessProfile::calibrated();
    unsigned jobs = 1;
    std::size_t width = 128;  // size of generated inputs when none are given
    std::size_t height = 128;
    std::vector<std::string> input_paths;
    std::string output_dir;
};

/// Frames the app consumes: one image for Robert/Median/Gamma, two for Frame
/// (previous, current) and 33 for KDE (32 history frames, then current).
inline std::size_t frames_required(AppKind app) {
    switch (app) {
    case AppKind::Frame: return 2;
    case AppKind::Kde: return kKdeHistory + 1;
    default: return 1;
    }
}

inline std::size_t operands_per_pixel(AppKind app) {
    switch (app) {
    case AppKind::Robert: return 4;
    case AppKind::Median: return 9;
    case AppKind::Frame: return 2;
    case AppKind::Gamma: return 1;
    case AppKind::Kde: return kKdeHistory + 1;
    }
    return 0;
}

enum class InputKind { Gradient, Checkerboard, Scene, SaltPepper, Video, StaticVideo };

/// Deterministic synthetic stand-ins for the benchmark inputs.
inline std::vector<ImageGray> gen_test_inputs(InputKind kind, std::size_t w, std::size_t h) {
    switch (kind) {
    case InputKind::Gradient: return {synth::gradient(w, h)};
    case InputKind::Checkerboard: return {synth::checkerboard(w, h)};
    case InputKind::Scene: return {synth::scene(w, h)};
    case InputKind::SaltPepper: return {synth::salt_pepper(synth::scene(w, h))};
    case InputKind::Video: return synth::video(w, h);
    case InputKind::StaticVideo: {
        synth::VideoSpec spec;
        spec.moving = false;
        spec.temporal_noise = 0.0;
        return synth::video(w, h, spec);
    }
    }
    return {};
}

inline std::vector<ImageGray> default_inputs(AppKind app, std::size_t w, std::size_t h) {
    switch (app) {
    case AppKind::Median: return gen_test_inputs(InputKind::SaltPepper, w, h);
    case AppKind::Frame:
    case AppKind::Kde: return gen_test_inputs(InputKind::Video, w, h);
    default: return gen_test_inputs(InputKind::Scene, w, h);
    }
}

/// Keeps the trailing frames the app needs and checks their geometry.
inline std::vector<ImageGray> select_frames(AppKind app, std::vector<ImageGray> frames) {
    const std::size_t need = frames_required(app);
    if (frames.size() < need)
        throw DomainError(std::string(app_name(app)) + " needs " + std::to_string(need) + " input frames, got " +
                          std::to_string(frames.size()));
    frames.erase(frames.begin(), frames.end() - static_cast<std::ptrdiff_t>(need));
    for (const auto& f : frames)
        if (!same_dims(f, frames.front())) throw DomainError("input frames differ in size");
    return frames;
}

/// Operand values of one output pixel, in circuit input order.
inline std::vector<double> gather_operands(AppKind app, const std::vector<ImageGray>& frames, std::size_t x,
                                           std::size_t y) {
    const auto sx = static_cast<std::ptrdiff_t>(x), sy = static_cast<std::ptrdiff_t>(y);
    const ImageGray& img = frames.back();
    switch (app) {
    case AppKind::Robert:
        return {img.clamped(sx, sy), img.clamped(sx + 1, sy), img.clamped(sx, sy + 1), img.clamped(sx + 1, sy + 1)};
    case AppKind::Median: {
        std::vector<double> v;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) v.push_back(img.clamped(sx + dx, sy + dy));
        return v;
    }
    case AppKind::Frame: return {frames[1](x, y), frames[0](x, y)}; // current, previous
    case AppKind::Gamma: return {img(x, y)};
    case AppKind::Kde: {
        std::vector<double> v{frames.back()(x, y)};
        for (std::size_t i = 0; i < kKdeHistory; ++i) v.push_back(frames[i](x, y));
        return v;
    }
    }
    return {};
}

struct AppParams {
    double frame_theta = 0.1;
    KdeParams kde{};
    double gamma_exponent = 0.45;
};

/// Exact floating-point result for one pixel from its operands.
inline double golden_pixel(AppKind app, std::span<const double> v, const AppParams& prm) {
    switch (app) {
    case AppKind::Robert: return robert_golden(v[0], v[1], v[2], v[3]);
    case AppKind::Median: return median_golden(std::span<const double, 9>(v.data(), 9));
    case AppKind::Frame: return frame_golden(v[0], v[1], prm.frame_theta) ? 1.0 : 0.0;
    case AppKind::Gamma: return gamma_golden(v[0], prm.gamma_exponent);
    case AppKind::Kde: return kde_golden(v[0], v.subspan(1), prm.kde) ? 1.0 : 0.0;
    }
    return 0.0;
}

/// Maximum-accuracy output image for the given (already selected) frames.
inline ImageGray golden_eval(AppKind app, const std::vector<ImageGray>& frames, const AppParams& prm = {}) {
    const auto& ref = frames.back();
    ImageGray out(ref.width(), ref.height());
    for (std::size_t y = 0; y < ref.height(); ++y)
        for (std::size_t x = 0; x < ref.width(); ++x) {
            const auto ops = gather_operands(app, frames, x, y);
            out.set(x, y, golden_pixel(app, ops, prm));
        }
    return out;
}

struct AccessCounters {
    AccessStats memory{};
    std::uint64_t adc_conversions = 0;
    std::uint64_t dac_conversions = 0;

    AccessCounters& operator+=(const AccessCounters& o) noexcept {
        memory += o.memory;
        adc_conversions += o.adc_conversions;
        dac_conversions += o.dac_conversions;
        return *this;
    }
    friend bool operator==(const AccessCounters&, const AccessCounters&) = default;
};

namespace detail {

inline constexpr std::uint32_t kMemoryNoiseStream = 0xFFFF;

/// Turns stored operand levels and circuit constants into bitstreams for one
/// pixel. Streams requested with the same generator id share their random
/// sequence (correlated); distinct ids are independent.
class StreamFactory {
public:
    StreamFactory(SystemDesign design, std::size_t length, std::uint64_t seed, LfsrMode mode,
                  const LfsrSequence& seq)
        : design_(design), length_(length), seed_(seed), mode_(mode), seq_(seq) {}

    void begin_pixel(std::uint32_t x, std::uint32_t y) {
        x_ = x;
        y_ = y;
        uniforms_.clear();
    }

    /// `level` is the value read back from memory (already on the 10-bit grid
    /// for the digital designs).
    Bitstream operand(double level, std::uint32_t gen) { return make(level, gen, false); }

    /// Circuit constants do not pass through memory.
    Bitstream constant(double c, std::uint32_t gen) { return make(c, gen, true); }

private:
    Bitstream make(double v, std::uint32_t gen, bool constant) {
        switch (design_) {
        case SystemDesign::ConvLfsr: return dsc(adc_quantize(v, kAdcConfig), gen);
        case SystemDesign::ConvMtj: {
            // Stored 10-bit code re-quantized by the 8-bit DAC before the ASC.
            const auto code8 = constant ? adc_quantize(v, kDacConfig)
                                        : adc_quantize(dac_dequantize(adc_quantize(v, kAdcConfig), kAdcConfig),
                                                       kDacConfig);
            return shared(gen).generate(dac_dequantize(code8, kDacConfig));
        }
        case SystemDesign::StochMem: return shared(gen).generate(v);
        }
        throw DomainError("unknown design");
    }

    Bitstream dsc(std::uint32_t code, std::uint32_t gen) {
        const std::uint32_t period = seq_.period();
        std::uint64_t start;
        if (mode_ == LfsrMode::PerPixel) {
            const auto draw = derive_generator({seed_, x_, y_, gen}).next_u64();
            start = seq_.position_of(lfsr_seed_from(draw, seq_.spec()));
        } else {
            const auto draw = derive_generator({seed_, 0xFFFFFFFFu, y_, gen}).next_u64();
            start = seq_.position_of(lfsr_seed_from(draw, seq_.spec())) +
                    static_cast<std::uint64_t>(x_) * (length_ % period);
        }
        return dsc_generate(code, length_, seq_, static_cast<std::uint32_t>(start % period));
    }

    const SharedUniforms& shared(std::uint32_t gen) {
        auto it = uniforms_.find(gen);
        if (it == uniforms_.end())
            it = uniforms_.emplace(gen, SharedUniforms(length_, derive_generator({seed_, x_, y_, gen}))).first;
        return it->second;
    }

    SystemDesign design_;
    std::size_t length_;
    std::uint64_t seed_;
    LfsrMode mode_;
    const LfsrSequence& seq_;
    std::uint32_t x_ = 0, y_ = 0;
    std::map<std::uint32_t, SharedUniforms> uniforms_;
};

/// Evaluates the app circuit on stored operand levels; returns the output pixel.
inline double evaluate_circuit(AppKind app, std::span<const double> levels, StreamFactory& f,
                               const AppParams& prm, const BernsteinPoly& gamma_poly) {
    switch (app) {
    case AppKind::Robert: {
        // One generator for the four pixels (both XOR pairs correlated), one for the select.
        const auto p00 = f.operand(levels[0], 0), p01 = f.operand(levels[1], 0), p10 = f.operand(levels[2], 0),
                   p11 = f.operand(levels[3], 0);
        const auto sel = f.constant(0.5, 1);
        return estimate_value(robert_eval(p00, p01, p10, p11, sel));
    }
    case AppKind::Median: {
        std::vector<Bitstream> s;
        s.reserve(9);
        for (double v : levels) s.push_back(f.operand(v, 0));
        return estimate_value(median_eval(std::span<const Bitstream, 9>(s.data(), 9)));
    }
    case AppKind::Frame: {
        const auto cur = f.operand(levels[0], 0), prev = f.operand(levels[1], 0);
        return frame_diff_eval(cur, prev, prm.frame_theta) ? 1.0 : 0.0;
    }
    case AppKind::Gamma: {
        // Independent x streams on generators 0..n-1, coefficients share generator n.
        const unsigned n = gamma_poly.degree();
        std::vector<Bitstream> xs, cs;
        for (unsigned i = 0; i < n; ++i) xs.push_back(f.operand(levels[0], i));
        for (double b : gamma_poly.coeffs) cs.push_back(f.constant(b, n));
        return estimate_value(gamma_eval(xs, cs));
    }
    case AppKind::Kde: {
        const auto cur = f.operand(levels[0], 0);
        std::vector<Bitstream> hist;
        hist.reserve(kKdeHistory);
        for (std::size_t i = 1; i < levels.size(); ++i) hist.push_back(f.operand(levels[i], 0));
        return kde_eval(cur, hist, prm.kde) ? 1.0 : 0.0;
    }
    }
    return 0.0;
}

} // namespace detail

struct ExperimentReport {
    AppKind app{};
    SystemDesign design{};
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double inaccuracy_percent = 0.0;
    CostReport area;
    CostReport energy; // per output pixel, pJ
    AccessCounters counters;
    AccessCounts access_per_pixel;
    double wall_seconds = 0.0;
    ImageGray output;
    ImageGray expected;
};

/// Runs the full data path of one design over every pixel of the input:
/// Conv designs ADC-quantize, store/load through digital memory, then DSC
/// (LFSR + comparator) or DAC + ASC; StochMem stores in analog memory and
/// converts with the ASC. Rows are processed in parallel; each pixel derives
/// its own generators, so results do not depend on the worker count.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, std::vector<ImageGray> inputs,
                                       const CostRegistry& reg = CostRegistry::defaults()) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.length < 1 || cfg.length > Bitstream::kMaxLength) throw DomainError("bitstream length out of range");
    const auto frames = select_frames(cfg.app, std::move(inputs));
    const AppParams prm{cfg.frame_theta, cfg.kde, cfg.gamma_exponent};
    const BernsteinPoly gamma_poly = cfg.app == AppKind::Gamma ? fit_gamma(cfg.gamma_exponent, cfg.gamma_degree)
                                                               : BernsteinPoly{{0.0, 1.0}, 0.0};
    const std::size_t w = frames.back().width(), h = frames.back().height();
    const std::size_t n_ops = operands_per_pixel(cfg.app);
    const auto& seq = default_lfsr_sequence();

    std::vector<double> out(w * h, 0.0);
    std::vector<AccessCounters> row_counters(h);
    std::atomic<std::size_t> next_row{0};

    auto worker = [&]() {
        detail::StreamFactory factory(cfg.design, cfg.length, cfg.global_seed, cfg.lfsr_mode, seq);
        std::vector<double> levels(n_ops);
        for (std::size_t y = next_row++; y < h; y = next_row++) {
            // Memory is partitioned by row; addresses are pixel-major within it.
            MemoryInstance mem = cfg.design == SystemDesign::StochMem ? MemoryInstance::analog(cfg.noise)
                                                                      : MemoryInstance::digital(10);
            AccessCounters& cnt = row_counters[y];
            for (std::size_t x = 0; x < w; ++x) {
                const auto ops = gather_operands(cfg.app, frames, x, y);
                auto noise_rng = derive_generator({cfg.global_seed, static_cast<std::uint32_t>(x),
                                                   static_cast<std::uint32_t>(y), detail::kMemoryNoiseStream});
                for (std::size_t k = 0; k < n_ops; ++k) {
                    const std::uint64_t addr = x * n_ops + k;
                    if (cfg.design == SystemDesign::StochMem) {
                        mem.write(addr, ops[k], noise_rng);
                        levels[k] = mem.read(addr, noise_rng);
                    } else {
                        const auto code = adc_quantize(ops[k], kAdcConfig);
                        ++cnt.adc_conversions;
                        mem.write(addr, dac_dequantize(code, kAdcConfig), noise_rng);
                        levels[k] = mem.read(addr, noise_rng);
                        if (cfg.design == SystemDesign::ConvMtj) ++cnt.dac_conversions;
                    }
                }
                factory.begin_pixel(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
                const double v = detail::evaluate_circuit(cfg.app, levels, factory, prm, gamma_poly);
                out[y * w + x] = std::clamp(v, 0.0, 1.0);
            }
            cnt.memory = mem.stats();
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(h)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    ExperimentReport rep;
    rep.app = cfg.app;
    rep.design = cfg.design;
    rep.length = cfg.length;
    rep.seed = cfg.global_seed;
    rep.output = ImageGray(w, h);
    for (std::size_t i = 0; i < out.size(); ++i) rep.output.set(i % w, i / w, out[i]);
    rep.expected = golden_eval(cfg.app, frames, prm);
    rep.inaccuracy_percent = error_metric(rep.output, rep.expected);
    for (const auto& c : row_counters) rep.counters += c;

    const double pixels = static_cast<double>(w * h);
    rep.access_per_pixel = {cfg.access.adc * rep.counters.adc_conversions / pixels,
                            cfg.access.dac * rep.counters.dac_conversions / pixels,
                            cfg.access.read * rep.counters.memory.reads / pixels,
                            cfg.access.write * rep.counters.memory.writes / pixels};
    const auto profile = default_profile(cfg.app, reg);
    rep.area = area_report(cfg.design, profile, reg);
    rep.energy = energy_report(cfg.design, profile, cfg.length, rep.access_per_pixel, reg);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    std::vector<ImageGray> inputs;
    if (cfg.input_paths.empty()) {
        inputs = default_inputs(cfg.app, cfg.width, cfg.height);
    } else {
        for (const auto& p : cfg.input_paths) inputs.push_back(load_pgm(p));
    }
    return run_experiment(cfg, std::move(inputs));
}

// ---------------------------------------------------------------------------
// Sweeps and CSV.

struct SweepRow {
    AppKind app{};
    SystemDesign design{};
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double inaccuracy_percent = 0.0;
    double energy_pJ_per_pixel = 0.0;
    Shares energy_share;
    double area_um2 = 0.0;
    Shares area_share;
};

inline SweepRow to_row(const ExperimentReport& r) {
    return {r.app,           r.design, r.length, r.seed, r.inaccuracy_percent, r.energy.total(),
            share_breakdown(r.energy), r.area.total(), share_breakdown(r.area)};
}

inline constexpr std::string_view kCsvHeader =
    "app,design,length,seed,inaccuracy_percent,energy_pJ_per_pixel,energy_share_input,energy_share_conversion,"
    "energy_share_logic,area_um2,area_share_input,area_share_conversion,area_share_logic";

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << app_name(r.app) << ',' << design_name(r.design) << ',' << r.length << ',' << r.seed << ','
           << std::fixed << std::setprecision(6) << r.inaccuracy_percent << ',' << r.energy_pJ_per_pixel << ','
           << r.energy_share.input_layer << ',' << r.energy_share.conversion << ',' << r.energy_share.logic << ','
           << std::setprecision(3) << r.area_um2 << ',' << std::setprecision(6) << r.area_share.input_layer << ','
           << r.area_share.conversion << ',' << r.area_share.logic << '\n';
        os.unsetf(std::ios::fixed);
    }
}

struct SweepSpec {
    std::vector<AppKind> apps{kAllApps.begin(), kAllApps.end()};
    std::vector<SystemDesign> designs{kAllDesigns.begin(), kAllDesigns.end()};
    std::vector<std::size_t> lengths{128, 256, 512, 1024};
    unsigned seeds = 20; // run index r uses global_seed + r
};

/// One row per (app, design, length, seed) in that nesting order. Inputs are
/// generated once per app (or loaded once from the template's paths).
inline std::vector<SweepRow> sweep(const ExperimentConfig& tmpl, const SweepSpec& spec) {
    if (spec.apps.empty() || spec.designs.empty() || spec.lengths.empty() || spec.seeds == 0)
        throw DomainError("sweep needs nonempty apps, designs, lengths and seeds");
    std::vector<SweepRow> rows;
    for (auto app : spec.apps) {
        std::vector<ImageGray> inputs;
        if (tmpl.input_paths.empty())
            inputs = default_inputs(app, tmpl.width, tmpl.height);
        else
            for (const auto& p : tmpl.input_paths) inputs.push_back(load_pgm(p));
        for (auto design : spec.designs)
            for (auto len : spec.lengths)
                for (unsigned r = 0; r < spec.seeds; ++r) {
                    ExperimentConfig cfg = tmpl;
                    cfg.app = app;
                    cfg.design = design;
                    cfg.length = len;
                    cfg.global_seed = tmpl.global_seed + r;
                    rows.push_back(to_row(run_experiment(cfg, inputs)));
                }
    }
    return rows;
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double median_inaccuracy(const std::vector<SweepRow>& rows, AppKind app, SystemDesign design,
                                std::size_t length) {
    std::vector<double> v;
    for (const auto& r : rows)
        if (r.app == app && r.design == design && r.length == length) v.push_back(r.inaccuracy_percent);
    return median_of(std::move(v));
}

// ---------------------------------------------------------------------------
// Noise calibration.

struct GapMeasurement {
    double conv_percent = 0.0;     // five-app mean, ConvMtj
    double stochmem_percent = 0.0; // five-app mean, StochMem
    double gap_pp() const { return stochmem_percent - conv_percent; }
};

/// Five-app mean inaccuracy of ConvMtj and StochMem at the template's length,
/// averaged over `seeds` runs. Both designs use identical per-pixel ASC
/// sources, so the gap isolates the storage path.
inline GapMeasurement measure_gap(const ExperimentConfig& tmpl, double sigma, unsigned seeds,
                                  const std::vector<std::vector<ImageGray>>& inputs) {
    GapMeasurement g;
    for (std::size_t a = 0; a < kAllApps.size(); ++a)
        for (unsigned r = 0; r < seeds; ++r) {
            ExperimentConfig cfg = tmpl;
            cfg.app = kAllApps[a];
            cfg.global_seed = tmpl.global_seed + r;
            cfg.noise = NoiseModel::symmetric(sigma);
            cfg.design = SystemDesign::ConvMtj;
            g.conv_percent += run_experiment(cfg, inputs[a]).inaccuracy_percent;
            cfg.design = SystemDesign::StochMem;
            g.stochmem_percent += run_experiment(cfg, inputs[a]).inaccuracy_percent;
        }
    const double n = static_cast<double>(kAllApps.size() * seeds);
    g.conv_percent /= n;
    g.stochmem_percent /= n;
    return g;
}

struct NoiseCalibration {
    NoiseModel noise;
    double sigma = 0.0;
    GapMeasurement measured;
    int iterations = 0;
};

inline std::vector<std::vector<ImageGray>> default_inputs_all(std::size_t w, std::size_t h) {
    std::vector<std::vector<ImageGray>> v;
    for (auto app : kAllApps) v.push_back(default_inputs(app, w, h));
    return v;
}

/// Bisection on a symmetric sigma in [0, 0.1] until the five-app gap is within
/// `tolerance_pp` of the target.
inline NoiseCalibration calibrate_noise(double target_gap_pp, const ExperimentConfig& tmpl, unsigned seeds = 2,
                                        double tolerance_pp = 0.05) {
    if (target_gap_pp < 0.0) throw DomainError("calibration target must be >= 0");
    const auto inputs = default_inputs_all(tmpl.width, tmpl.height);
    NoiseCalibration cal;
    if (target_gap_pp == 0.0) {
        cal.measured = measure_gap(tmpl, 0.0, seeds, inputs);
        return cal;
    }
    double lo = 0.0, hi = 0.1;
    const auto at_hi = measure_gap(tmpl, hi, seeds, inputs);
    if (at_hi.gap_pp() < target_gap_pp) {
        std::ostringstream msg;
        msg << "target gap " << target_gap_pp << " pp unreachable: sigma 0.1 only gives " << at_hi.gap_pp() << " pp";
        throw DomainError(msg.str());
    }
    for (int it = 1; it <= 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto g = measure_gap(tmpl, mid, seeds, inputs);
        cal.sigma = mid;
        cal.measured = g;
        cal.iterations = it;
        if (std::abs(g.gap_pp() - target_gap_pp) <= tolerance_pp) break;
        (g.gap_pp() < target_gap_pp ? lo : hi) = mid;
    }
    cal.noise = NoiseModel::symmetric(cal.sigma);
    return cal;
}

// ---------------------------------------------------------------------------
// Flat key=value configuration.

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

/// Keys: app, design, length, seed, sigma, write_sigma, read_sigma,
/// frame_theta, kde_delta, kde_theta, gamma_exponent, gamma_degree,
/// lfsr_mode (per-pixel | free-running), access_adc, access_write,
/// access_read, access_dac, jobs, width, height, inputs (comma list),
/// output_dir. '#' starts a comment. STOCHMEM_SEED overrides seed.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg = {}) {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError("config line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "app") {
                auto a = parse_app(val);
                if (!a) fail("unknown app '" + val + "'");
                cfg.app = *a;
            } else if (key == "design") {
                auto d = parse_design(val);
                if (!d) fail("unknown design '" + val + "'");
                cfg.design = *d;
            } else if (key == "length") cfg.length = std::stoul(val);
            else if (key == "seed") cfg.global_seed = std::stoull(val);
            else if (key == "sigma") cfg.noise = NoiseModel::symmetric(std::stod(val));
            else if (key == "write_sigma") cfg.noise = NoiseModel(std::stod(val), cfg.noise.read_sigma);
            else if (key == "read_sigma") cfg.noise = NoiseModel(cfg.noise.write_sigma, std::stod(val));
            else if (key == "frame_theta") cfg.frame_theta = std::stod(val);
            else if (key == "kde_delta") cfg.kde.delta = std::stod(val);
            else if (key == "kde_theta") cfg.kde.theta = std::stod(val);
            else if (key == "gamma_exponent") cfg.gamma_exponent = std::stod(val);
            else if (key == "gamma_degree") cfg.gamma_degree = static_cast<unsigned>(std::stoul(val));
            else if (key == "lfsr_mode") {
                if (val == "per-pixel") cfg.lfsr_mode = LfsrMode::PerPixel;
                else if (val == "free-running") cfg.lfsr_mode = LfsrMode::FreeRunning;
                else fail("unknown lfsr_mode '" + val + "'");
            } else if (key == "access_adc") cfg.access.adc = std::stod(val);
            else if (key == "access_write") cfg.access.write = std::stod(val);
            else if (key == "access_read") cfg.access.read = std::stod(val);
            else if (key == "access_dac") cfg.access.dac = std::stod(val);
            else if (key == "jobs") cfg.jobs = static_cast<unsigned>(std::stoul(val));
            else if (key == "width") cfg.width = std::stoul(val);
            else if (key == "height") cfg.height = std::stoul(val);
            else if (key == "inputs") cfg.input_paths = split_list(val);
            else if (key == "output_dir") cfg.output_dir = val;
            else fail("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            fail("bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            fail("value out of range for '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg = {}) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    return parse_config(in, std::move(cfg));
}

/// Applies STOCHMEM_SEED if set.
inline void apply_env_overrides(ExperimentConfig& cfg) {
    if (const char* s = std::getenv("STOCHMEM_SEED"); s && *s) {
        try {
            cfg.global_seed = std::stoull(s);
        } catch (const std::exception&) {
            throw ParseError("STOCHMEM_SEED is not an unsigned integer");
        }
    }
}

} // namespace stochmem
