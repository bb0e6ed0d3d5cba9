#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stochmem/circuits.hpp"
#include "stochmem/error.hpp"

namespace stochmem {

enum class EnergyMode { PerCycle, PerConversion, PerAccessRead, PerAccessWrite };

inline std::string_view energy_mode_name(EnergyMode m) {
    switch (m) {
    case EnergyMode::PerCycle: return "per_cycle";
    case EnergyMode::PerConversion: return "per_conversion";
    case EnergyMode::PerAccessRead: return "per_access_read";
    case EnergyMode::PerAccessWrite: return "per_access_write";
    }
    return "?";
}

inline EnergyMode parse_energy_mode(std::string_view s) {
    for (auto m : {EnergyMode::PerCycle, EnergyMode::PerConversion, EnergyMode::PerAccessRead,
                   EnergyMode::PerAccessWrite})
        if (energy_mode_name(m) == s) return m;
    throw ParseError("unknown energy_mode '" + std::string(s) + "'");
}

struct UnitCost {
    double area_um2 = 0.0;
    double energy_pJ = 0.0;
    EnergyMode energy_mode = EnergyMode::PerCycle;
};

/// Unit names used by the registry. Memory cells carry one entry per access kind.
namespace unit {
inline constexpr std::string_view kAdc = "adc_10bit";
inline constexpr std::string_view kSramRead = "sram_cell_read";
inline constexpr std::string_view kSramWrite = "sram_cell_write";
inline constexpr std::string_view kLfsr = "lfsr_10bit";
inline constexpr std::string_view kComparator = "comparator_10bit";
inline constexpr std::string_view kDac = "dac_8bit";
inline constexpr std::string_view kCounter = "counter_10bit";
inline constexpr std::string_view kAnalogRead = "analog_cell_read";
inline constexpr std::string_view kAnalogWrite = "analog_cell_write";
inline constexpr std::string_view kAsc = "asc";
inline constexpr std::string_view kSac = "sac_integrator";

inline std::string logic(AppKind app) { return "logic_" + std::string(app_name(app)); }
} // namespace unit

/// Name -> unit cost table; defaults are the 45 nm synthesis constants.
class CostRegistry {
public:
    static CostRegistry defaults() {
        using enum EnergyMode;
        CostRegistry r;
        r.set(unit::kAdc, {50000, 20, PerConversion});
        r.set(unit::kSramRead, {0.35, 10, PerAccessRead});
        r.set(unit::kSramWrite, {0.35, 10, PerAccessWrite});
        r.set(unit::kLfsr, {194, 0.355, PerCycle});
        r.set(unit::kComparator, {96, 0.041, PerCycle});
        r.set(unit::kDac, {16000, 64, PerConversion});
        r.set(unit::kCounter, {254, 0.179, PerCycle});
        r.set(unit::kAnalogRead, {58.7, 10, PerAccessRead});
        r.set(unit::kAnalogWrite, {58.7, 100, PerAccessWrite});
        r.set(unit::kAsc, {15, 0.030, PerCycle});
        r.set(unit::kSac, {110, 0.010, PerCycle});
        r.set(unit::logic(AppKind::Robert), {339, 0.440, PerCycle});
        r.set(unit::logic(AppKind::Median), {5382, 4.090, PerCycle});
        r.set(unit::logic(AppKind::Frame), {457, 0.413, PerCycle});
        r.set(unit::logic(AppKind::Gamma), {76, 0.042, PerCycle});
        r.set(unit::logic(AppKind::Kde), {8691, 7.094, PerCycle});
        return r;
    }

    /// Loads {"units": [{"name", "area_um2", "energy_pJ", "energy_mode"}, ...]}.
    /// Entries override the defaults; unknown names are added.
    static CostRegistry from_json(const nlohmann::json& doc) {
        CostRegistry r = defaults();
        if (!doc.contains("units") || !doc["units"].is_array())
            throw ParseError("cost registry needs a 'units' array");
        for (const auto& u : doc["units"]) {
            try {
                UnitCost c{u.at("area_um2").get<double>(), u.at("energy_pJ").get<double>(),
                           parse_energy_mode(u.at("energy_mode").get<std::string>())};
                if (c.area_um2 < 0 || c.energy_pJ < 0) throw ParseError("negative unit cost");
                r.set(u.at("name").get<std::string>(), c);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(std::string("bad cost registry entry: ") + e.what());
            }
        }
        return r;
    }

    static CostRegistry from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open cost registry " + path);
        try {
            return from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("cost registry is not valid JSON: ") + e.what());
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json units = nlohmann::json::array();
        for (const auto& [name, c] : units_)
            units.push_back({{"name", name},
                             {"area_um2", c.area_um2},
                             {"energy_pJ", c.energy_pJ},
                             {"energy_mode", energy_mode_name(c.energy_mode)}});
        return {{"units", units}};
    }

    void set(std::string_view name, UnitCost c) { units_[std::string(name)] = c; }

    const UnitCost& at(std::string_view name) const {
        const auto it = units_.find(std::string(name));
        if (it == units_.end()) throw ConfigError("cost registry has no unit '" + std::string(name) + "'");
        return it->second;
    }

    const std::map<std::string, UnitCost>& units() const noexcept { return units_; }

private:
    std::map<std::string, UnitCost> units_;
};

enum class SystemDesign { ConvLfsr, ConvMtj, StochMem };

inline constexpr std::array<SystemDesign, 3> kAllDesigns = {SystemDesign::ConvLfsr, SystemDesign::ConvMtj,
                                                           SystemDesign::StochMem};

inline std::string_view design_name(SystemDesign d) {
    switch (d) {
    case SystemDesign::ConvLfsr: return "conv-lfsr";
    case SystemDesign::ConvMtj: return "conv-mtj";
    case SystemDesign::StochMem: return "stochmem";
    }
    return "?";
}

inline std::optional<SystemDesign> parse_design(std::string_view name) {
    for (auto d : kAllDesigns)
        if (design_name(d) == name) return d;
    return std::nullopt;
}

struct AppProfile {
    AppKind app = AppKind::Robert;
    unsigned n_streams = 0; // comparators (ConvLfsr) or ASCs
    unsigned n_lfsr = 0;
    double mem_area_digital_um2 = 0.0;
    double mem_area_analog_um2 = 0.0;
    unsigned n_operands = 0;
    UnitCost logic{};
};

/// Stream and LFSR counts are recovered from the per-app converter areas
/// (DSC = 194 n_lfsr + 96 n_streams, ASC = 15 n_streams); memory areas are
/// taken as given because they do not divide into whole cells.
inline AppProfile default_profile(AppKind app, const CostRegistry& reg = CostRegistry::defaults()) {
    struct Row {
        unsigned n_lfsr, n_streams;
        double mem_digital, mem_analog;
    };
    Row row{};
    switch (app) {
    case AppKind::Robert: row = {5, 5, 21, 183}; break;
    case AppKind::Median: row = {10, 10, 38, 336}; break;
    case AppKind::Frame: row = {2, 4, 17, 153}; break;
    case AppKind::Gamma: row = {2, 8, 35, 306}; break;
    case AppKind::Kde: row = {11, 42, 122, 1071}; break;
    }
    return AppProfile{app, row.n_streams, row.n_lfsr, row.mem_digital, row.mem_analog, row.n_streams,
                      reg.at(unit::logic(app))};
}

enum class CostGroup { InputLayer, Conversion, Logic };

inline std::string_view group_name(CostGroup g) {
    switch (g) {
    case CostGroup::InputLayer: return "input_layer";
    case CostGroup::Conversion: return "conversion";
    case CostGroup::Logic: return "logic";
    }
    return "?";
}

struct CostEntry {
    std::string unit;
    CostGroup group;
    double value;
};

struct Shares {
    double input_layer = 0.0;
    double conversion = 0.0;
    double logic = 0.0;
};

struct CostReport {
    std::vector<CostEntry> entries;

    void add(std::string unit, CostGroup group, double value) {
        entries.push_back({std::move(unit), group, value});
    }

    double group_sum(CostGroup g) const {
        double s = 0.0;
        for (const auto& e : entries)
            if (e.group == g) s += e.value;
        return s;
    }

    double total() const {
        double s = 0.0;
        for (const auto& e : entries) s += e.value;
        return s;
    }

    /// Value of one named entry (0 if absent).
    double entry(std::string_view unit) const {
        double s = 0.0;
        for (const auto& e : entries)
            if (e.unit == unit) s += e.value;
        return s;
    }
};

inline Shares share_breakdown(const CostReport& report) {
    const double total = report.total();
    if (!(total > 0.0)) throw DomainError("share breakdown of a zero-total report");
    return {report.group_sum(CostGroup::InputLayer) / total, report.group_sum(CostGroup::Conversion) / total,
            report.group_sum(CostGroup::Logic) / total};
}

inline CostReport area_report(SystemDesign design, const AppProfile& p,
                              const CostRegistry& reg = CostRegistry::defaults()) {
    using enum CostGroup;
    CostReport r;
    r.add("logic", Logic, p.logic.area_um2);
    switch (design) {
    case SystemDesign::ConvLfsr:
        r.add("memory", InputLayer, p.mem_area_digital_um2);
        r.add("adc", InputLayer, reg.at(unit::kAdc).area_um2);
        r.add("dsc", Conversion,
              reg.at(unit::kLfsr).area_um2 * p.n_lfsr + reg.at(unit::kComparator).area_um2 * p.n_streams);
        break;
    case SystemDesign::ConvMtj:
        r.add("memory", InputLayer, p.mem_area_digital_um2);
        r.add("adc", InputLayer, reg.at(unit::kAdc).area_um2);
        r.add("dac", Conversion, reg.at(unit::kDac).area_um2);
        r.add("asc", Conversion, reg.at(unit::kAsc).area_um2 * p.n_streams);
        break;
    case SystemDesign::StochMem:
        r.add("memory", InputLayer, p.mem_area_analog_um2);
        r.add("asc", Conversion, reg.at(unit::kAsc).area_um2 * p.n_streams);
        break;
    }
    return r;
}

/// Per-pixel event counts driving the per-conversion and per-access energies.
struct AccessCounts {
    double adc_conv = 0.0;
    double dac_conv = 0.0;
    double mem_reads = 0.0;
    double mem_writes = 0.0;
};

/// Global multipliers turning an app's operand count into per-pixel access
/// counts. One set is shared by every app.
struct AccessProfile {
    double adc = 1.0;
    double write = 1.0;
    double read = 1.0;
    double dac = 1.0;

    /// One ADC conversion, one write, one read and one DAC conversion per operand.
    static constexpr AccessProfile per_operand_unit() { return {1.0, 1.0, 1.0, 1.0}; }

    /// Shipped default: the output of calibrate_access() on the default
    /// registry at L = 1024 (asserted by the test suite).
    static constexpr AccessProfile calibrated() { return {0.5, 0.25, 0.25, 0.5}; }

    friend bool operator==(const AccessProfile&, const AccessProfile&) = default;
};

inline AccessCounts default_access_counts(SystemDesign design, const AppProfile& p,
                                          AccessProfile mult = AccessProfile::calibrated()) {
    const double n = p.n_operands;
    AccessCounts a;
    a.mem_reads = mult.read * n;
    a.mem_writes = mult.write * n;
    if (design != SystemDesign::StochMem) a.adc_conv = mult.adc * n;
    if (design == SystemDesign::ConvMtj) a.dac_conv = mult.dac * n;
    return a;
}

/// Energy per output pixel in pJ for a bitstream of `length` cycles.
inline CostReport energy_report(SystemDesign design, const AppProfile& p, std::size_t length,
                                const AccessCounts& access, const CostRegistry& reg = CostRegistry::defaults()) {
    if (access.adc_conv < 0 || access.dac_conv < 0 || access.mem_reads < 0 || access.mem_writes < 0)
        throw DomainError("access counts must be nonnegative");
    using enum CostGroup;
    const double cycles = static_cast<double>(length);
    CostReport r;
    r.add("logic", Logic, p.logic.energy_pJ * cycles);
    const bool digital = design != SystemDesign::StochMem;
    if (digital) r.add("adc", InputLayer, reg.at(unit::kAdc).energy_pJ * access.adc_conv);
    r.add("memory_read", InputLayer,
          reg.at(digital ? unit::kSramRead : unit::kAnalogRead).energy_pJ * access.mem_reads);
    r.add("memory_write", InputLayer,
          reg.at(digital ? unit::kSramWrite : unit::kAnalogWrite).energy_pJ * access.mem_writes);
    switch (design) {
    case SystemDesign::ConvLfsr:
        r.add("dsc", Conversion,
              (reg.at(unit::kLfsr).energy_pJ * p.n_lfsr + reg.at(unit::kComparator).energy_pJ * p.n_streams) *
                  cycles);
        break;
    case SystemDesign::ConvMtj:
        r.add("dac", Conversion, reg.at(unit::kDac).energy_pJ * access.dac_conv);
        r.add("asc", Conversion, reg.at(unit::kAsc).energy_pJ * p.n_streams * cycles);
        break;
    case SystemDesign::StochMem:
        r.add("asc", Conversion, reg.at(unit::kAsc).energy_pJ * p.n_streams * cycles);
        break;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cross-app aggregates.

struct Aggregate {
    double mean_of_ratios = 0.0;
    double sum_based = 0.0;
};

/// Average reduction of `candidate` relative to `baseline`, 1 - c/b, over apps.
inline Aggregate average_reduction(std::span<const double> baseline, std::span<const double> candidate) {
    if (baseline.size() != candidate.size() || baseline.empty())
        throw DomainError("reduction needs matching nonempty series");
    double ratio_sum = 0.0, b_sum = 0.0, c_sum = 0.0;
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        ratio_sum += 1.0 - candidate[i] / baseline[i];
        b_sum += baseline[i];
        c_sum += candidate[i];
    }
    return {ratio_sum / static_cast<double>(baseline.size()), 1.0 - c_sum / b_sum};
}

/// Mean of per-report shares and shares of the summed reports.
struct ShareAggregate {
    Shares mean_of_shares;
    Shares sum_based;
};

inline ShareAggregate average_shares(std::span<const CostReport> reports) {
    ShareAggregate out;
    double in = 0, conv = 0, logic = 0;
    for (const auto& r : reports) {
        const auto s = share_breakdown(r);
        out.mean_of_shares.input_layer += s.input_layer;
        out.mean_of_shares.conversion += s.conversion;
        out.mean_of_shares.logic += s.logic;
        in += r.group_sum(CostGroup::InputLayer);
        conv += r.group_sum(CostGroup::Conversion);
        logic += r.group_sum(CostGroup::Logic);
    }
    const double n = static_cast<double>(reports.size());
    out.mean_of_shares.input_layer /= n;
    out.mean_of_shares.conversion /= n;
    out.mean_of_shares.logic /= n;
    const double total = in + conv + logic;
    out.sum_based = {in / total, conv / total, logic / total};
    return out;
}

struct EnergySummary {
    Aggregate mtj_vs_lfsr;      // reduction of ConvMtj relative to ConvLfsr
    Aggregate stochmem_vs_mtj;  // reduction of StochMem relative to ConvMtj
    std::array<ShareAggregate, 3> shares; // indexed by SystemDesign
    bool strictly_ordered = true;         // StochMem < ConvMtj < ConvLfsr for every app
};

inline EnergySummary summarize_energy(std::size_t length, AccessProfile mult,
                                      const CostRegistry& reg = CostRegistry::defaults()) {
    std::array<std::vector<CostReport>, 3> reports;
    std::array<std::vector<double>, 3> totals;
    EnergySummary s;
    for (auto app : kAllApps) {
        const auto prof = default_profile(app, reg);
        for (auto d : kAllDesigns) {
            auto rep = energy_report(d, prof, length, default_access_counts(d, prof, mult), reg);
            totals[static_cast<int>(d)].push_back(rep.total());
            reports[static_cast<int>(d)].push_back(std::move(rep));
        }
        const auto& t0 = totals[0].back();
        const auto& t1 = totals[1].back();
        const auto& t2 = totals[2].back();
        if (!(t2 < t1 && t1 < t0)) s.strictly_ordered = false;
    }
    s.mtj_vs_lfsr = average_reduction(totals[0], totals[1]);
    s.stochmem_vs_mtj = average_reduction(totals[1], totals[2]);
    for (int d = 0; d < 3; ++d) s.shares[d] = average_shares(reports[d]);
    return s;
}

/// Published five-app energy figures the access calibration aims at.
struct EnergyTargets {
    double mtj_vs_lfsr = 0.457;
    double stochmem_vs_mtj = 0.111;
    std::array<double, 3> logic_share = {0.312, 0.530, 0.601};
    std::array<double, 3> conversion_share = {0.644, 0.378, 0.221};
};

inline double energy_objective(const EnergySummary& s, const EnergyTargets& t = {}) {
    auto sq = [](double x) { return x * x; };
    double e = sq(s.mtj_vs_lfsr.mean_of_ratios - t.mtj_vs_lfsr) +
               sq(s.stochmem_vs_mtj.mean_of_ratios - t.stochmem_vs_mtj);
    for (int d = 0; d < 3; ++d)
        e += sq(s.shares[d].mean_of_shares.logic - t.logic_share[d]) +
             sq(s.shares[d].mean_of_shares.conversion - t.conversion_share[d]);
    return e;
}

struct AccessCalibration {
    AccessProfile profile;
    double objective = 0.0;
    EnergySummary summary;
};

/// Grid search over one global multiplier set (each multiplier in
/// {0.25, 0.5, ..., 2}) minimizing squared distance to the targets, subject to
/// strict StochMem < ConvMtj < ConvLfsr ordering for every app.
inline AccessCalibration calibrate_access(std::size_t length = 1024,
                                          const CostRegistry& reg = CostRegistry::defaults(),
                                          const EnergyTargets& targets = {}) {
    std::optional<AccessCalibration> best;
    for (int a = 1; a <= 8; ++a)
        for (int w = 1; w <= 8; ++w)
            for (int r = 1; r <= 8; ++r)
                for (int d = 1; d <= 8; ++d) {
                    const AccessProfile m{0.25 * a, 0.25 * w, 0.25 * r, 0.25 * d};
                    auto s = summarize_energy(length, m, reg);
                    if (!s.strictly_ordered) continue;
                    const double obj = energy_objective(s, targets);
                    if (!best || obj < best->objective) best = AccessCalibration{m, obj, s};
                }
    if (!best) throw DomainError("no access multiplier set preserves the energy ordering");
    return *best;
}

} // namespace stochmem
