#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stochmem/harness.hpp"

namespace stochmem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::vector<AppKind> parse_apps(const std::string& s) {
    if (s == "all") return {kAllApps.begin(), kAllApps.end()};
    std::vector<AppKind> out;
    for (const auto& name : split_list(s)) {
        auto a = parse_app(name);
        if (!a) throw UsageError("unknown app '" + name + "'");
        out.push_back(*a);
    }
    if (out.empty()) throw UsageError("empty app list");
    return out;
}

inline std::vector<SystemDesign> parse_designs(const std::string& s) {
    if (s == "all") return {kAllDesigns.begin(), kAllDesigns.end()};
    std::vector<SystemDesign> out;
    for (const auto& name : split_list(s)) {
        auto d = parse_design(name);
        if (!d) throw UsageError("unknown design '" + name + "'");
        out.push_back(*d);
    }
    if (out.empty()) throw UsageError("empty design list");
    return out;
}

inline std::vector<std::size_t> parse_lengths(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& tok : split_list(s)) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoul(tok, &pos);
            if (pos != tok.size() || v == 0) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("bad length '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError("empty length list");
    return out;
}

inline InputKind parse_input_kind(const std::string& s) {
    if (s == "gradient") return InputKind::Gradient;
    if (s == "checkerboard") return InputKind::Checkerboard;
    if (s == "scene") return InputKind::Scene;
    if (s == "salt-pepper") return InputKind::SaltPepper;
    if (s == "video") return InputKind::Video;
    if (s == "static-video") return InputKind::StaticVideo;
    throw UsageError("unknown input kind '" + s + "'");
}

inline AccessProfile parse_access(const std::string& s) {
    if (s == "calibrated") return AccessProfile::calibrated();
    if (s == "unit") return AccessProfile::per_operand_unit();
    throw UsageError("access must be 'calibrated' or 'unit'");
}

inline void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

inline void ensure_parent(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

inline nlohmann::json report_json(const ExperimentReport& r, const ExperimentConfig& cfg) {
    auto costs = [](const CostReport& c) {
        nlohmann::json j;
        for (const auto& e : c.entries) j[e.unit] = e.value;
        j["total"] = c.total();
        return j;
    };
    return {{"app", app_name(r.app)},
            {"design", design_name(r.design)},
            {"length", r.length},
            {"seed", r.seed},
            {"inaccuracy_percent", r.inaccuracy_percent},
            {"noise", {{"write_sigma", cfg.noise.write_sigma}, {"read_sigma", cfg.noise.read_sigma}}},
            {"access_multipliers",
             {{"adc", cfg.access.adc}, {"write", cfg.access.write}, {"read", cfg.access.read}, {"dac", cfg.access.dac}}},
            {"counters",
             {{"mem_reads", r.counters.memory.reads},
              {"mem_writes", r.counters.memory.writes},
              {"adc_conversions", r.counters.adc_conversions},
              {"dac_conversions", r.counters.dac_conversions}}},
            {"area_um2", costs(r.area)},
            {"energy_pJ_per_pixel", costs(r.energy)}};
}

} // namespace detail

/// Parses argv, runs one subcommand and returns the process exit code.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Stochastic computing system simulator and area/energy model", "stochmem"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    ExperimentConfig cfg;
    std::string config_path, costs_path, app_s = "robert", design_s = "conv-lfsr", inputs_s, out_dir;
    double sigma = -1.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file (flags override it)");
        sub->add_option("--costs", costs_path, "JSON unit-cost registry overriding the built-in table");
        sub->add_option("--seed", cfg.global_seed, "Global seed (STOCHMEM_SEED overrides the config file)");
        sub->add_option("--sigma", sigma, "Analog memory read/write noise sigma (full-scale units)");
        sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--width", cfg.width, "Width of generated inputs")->check(CLI::PositiveNumber);
        sub->add_option("--height", cfg.height, "Height of generated inputs")->check(CLI::PositiveNumber);
    };

    auto* run = app.add_subcommand("run", "Run one design on one application");
    add_common(run);
    run->add_option("--app", app_s, "robert|median|frame|gamma|kde");
    run->add_option("--design", design_s, "conv-lfsr|conv-mtj|stochmem");
    run->add_option("--length", cfg.length, "Bitstream length")->check(CLI::PositiveNumber);
    run->add_option("--inputs", inputs_s, "Comma-separated PGM frames (default: synthetic)");
    run->add_option("--out-dir", out_dir, "Directory for output.pgm, expected.pgm and report.json");

    std::string apps_s = "all", designs_s = "all", lengths_s = "128,256,512,1024", csv_path;
    unsigned seeds = 20;
    auto* sw = app.add_subcommand("sweep", "Sweep apps x designs x lengths x seeds into a CSV");
    add_common(sw);
    sw->add_option("--apps", apps_s, "Comma list or 'all'");
    sw->add_option("--designs", designs_s, "Comma list or 'all'");
    sw->add_option("--lengths", lengths_s, "Comma list of bitstream lengths");
    sw->add_option("--seeds", seeds, "Runs per configuration (seed, seed+1, ...)")->check(CLI::PositiveNumber);
    sw->add_option("--out", csv_path, "CSV output path (default: stdout)");

    std::string access_s = "calibrated";
    std::size_t cost_length = 1024;
    auto* cost = app.add_subcommand("cost", "Print area and energy tables");
    cost->add_option("--app", apps_s, "App name or 'all'");
    cost->add_option("--design", designs_s, "Design name or 'all'");
    cost->add_option("--length", cost_length, "Bitstream length for energy")->check(CLI::PositiveNumber);
    cost->add_option("--access", access_s, "Access-count multipliers: calibrated|unit");
    cost->add_option("--costs", costs_path, "JSON unit-cost registry overriding the built-in table");

    double exponent = 0.45;
    unsigned degree = 6;
    auto* fit = app.add_subcommand("fit-gamma", "Fit Bernstein coefficients for x^exponent");
    fit->add_option("--exponent", exponent, "Gamma exponent")->check(CLI::PositiveNumber);
    fit->add_option("--degree", degree, "Polynomial degree")->check(CLI::PositiveNumber);

    std::string kind_s = "scene";
    std::size_t gen_w = 128, gen_h = 128;
    auto* gen = app.add_subcommand("gen-inputs", "Write deterministic synthetic PGM inputs");
    gen->add_option("--kind", kind_s, "gradient|checkerboard|scene|salt-pepper|video|static-video");
    gen->add_option("--width", gen_w, "Image width")->check(CLI::PositiveNumber);
    gen->add_option("--height", gen_h, "Image height")->check(CLI::PositiveNumber);
    gen->add_option("--out-dir", out_dir, "Output directory")->required();

    double target = 0.19;
    unsigned cal_seeds = 2;
    bool calibrate_access_flag = false;
    auto* cal = app.add_subcommand("calibrate", "Calibrate memory noise (or access multipliers with --access)");
    add_common(cal);
    cal->add_option("--target", target, "Target StochMem-vs-ConvMtj gap in percentage points");
    cal->add_option("--seeds", cal_seeds, "Seeds averaged per gap measurement")->check(CLI::PositiveNumber);
    cal->add_option("--length", cfg.length, "Bitstream length")->check(CLI::PositiveNumber);
    cal->add_flag("--access", calibrate_access_flag, "Calibrate energy access multipliers instead of noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        // help() follows the selected subcommand, if any.
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        CostRegistry reg = costs_path.empty() ? CostRegistry::defaults() : CostRegistry::from_file(costs_path);

        auto build_config = [&](CLI::App* sub) {
            ExperimentConfig base;
            if (!config_path.empty()) base = load_config(config_path);
            apply_env_overrides(base);
            if (sub->count("--seed")) base.global_seed = cfg.global_seed;
            if (sigma >= 0.0) base.noise = NoiseModel::symmetric(sigma);
            if (sub->count("--jobs")) base.jobs = cfg.jobs;
            if (sub->count("--width")) base.width = cfg.width;
            if (sub->count("--height")) base.height = cfg.height;
            if (sub->get_option_no_throw("--length") && sub->count("--length")) base.length = cfg.length;
            if (sub->get_option_no_throw("--app") && sub->count("--app")) {
                auto a = parse_app(app_s);
                if (!a) throw UsageError("unknown app '" + app_s + "'");
                base.app = *a;
            }
            if (sub->get_option_no_throw("--design") && sub->count("--design")) {
                auto d = parse_design(design_s);
                if (!d) throw UsageError("unknown design '" + design_s + "'");
                base.design = *d;
            }
            if (!inputs_s.empty()) base.input_paths = split_list(inputs_s);
            if (sub->get_option_no_throw("--out-dir") && sub->count("--out-dir")) base.output_dir = out_dir;
            return base;
        };

        if (*run) {
            const auto c = build_config(run);
            std::vector<ImageGray> inputs;
            if (c.input_paths.empty())
                inputs = default_inputs(c.app, c.width, c.height);
            else
                for (const auto& p : c.input_paths) inputs.push_back(load_pgm(p));
            const auto rep = run_experiment(c, std::move(inputs), reg);
            out << "app\t" << app_name(rep.app) << "\ndesign\t" << design_name(rep.design) << "\nlength\t"
                << rep.length << "\nseed\t" << rep.seed << "\ninaccuracy_percent\t" << rep.inaccuracy_percent
                << "\nenergy_pJ_per_pixel\t" << rep.energy.total() << "\narea_um2\t" << rep.area.total() << '\n';
            if (!c.output_dir.empty()) {
                detail::ensure_dir(c.output_dir);
                const std::filesystem::path dir(c.output_dir);
                save_pgm(rep.output, (dir / "output.pgm").string());
                save_pgm(rep.expected, (dir / "expected.pgm").string());
                std::ofstream js(dir / "report.json");
                js << detail::report_json(rep, c).dump(2) << '\n';
            }
            return kExitOk;
        }

        if (*sw) {
            auto c = build_config(sw);
            SweepSpec spec{detail::parse_apps(apps_s), detail::parse_designs(designs_s),
                           detail::parse_lengths(lengths_s), seeds};
            if (spec.apps.size() > 1 && !c.input_paths.empty())
                throw UsageError("--inputs applies to a single app");
            std::vector<SweepRow> rows;
            for (auto a : spec.apps) {
                SweepSpec one = spec;
                one.apps = {a};
                auto part = sweep(c, one);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            if (csv_path.empty()) {
                write_csv(out, rows);
            } else {
                detail::ensure_parent(csv_path);
                std::ofstream f(csv_path);
                if (!f) throw ParseError("cannot write " + csv_path);
                write_csv(f, rows);
            }
            return kExitOk;
        }

        if (*cost) {
            const auto apps = detail::parse_apps(apps_s);
            const auto designs = detail::parse_designs(designs_s);
            const auto mult = detail::parse_access(access_s);
            out << "app\tdesign\tarea_um2\tarea_input\tarea_conversion\tarea_logic\tenergy_pJ_per_pixel\t"
                   "energy_input\tenergy_conversion\tenergy_logic\n";
            for (auto a : apps) {
                const auto prof = default_profile(a, reg);
                for (auto d : designs) {
                    const auto area = area_report(d, prof, reg);
                    const auto energy = energy_report(d, prof, cost_length, default_access_counts(d, prof, mult), reg);
                    out << app_name(a) << '\t' << design_name(d) << '\t' << area.total() << '\t'
                        << area.group_sum(CostGroup::InputLayer) << '\t' << area.group_sum(CostGroup::Conversion)
                        << '\t' << area.group_sum(CostGroup::Logic) << '\t' << energy.total() << '\t'
                        << energy.group_sum(CostGroup::InputLayer) << '\t'
                        << energy.group_sum(CostGroup::Conversion) << '\t' << energy.group_sum(CostGroup::Logic)
                        << '\n';
                }
            }
            out << "access_multipliers\tadc=" << mult.adc << "\twrite=" << mult.write << "\tread=" << mult.read
                << "\tdac=" << mult.dac << '\n';
            return kExitOk;
        }

        if (*fit) {
            const auto poly = fit_gamma(exponent, degree);
            out << "degree\t" << poly.degree() << '\n';
            out << std::setprecision(10);
            for (unsigned k = 0; k <= poly.degree(); ++k) out << "b" << k << '\t' << poly.coeffs[k] << '\n';
            out << "max_fit_error\t" << poly.max_fit_error << '\n';
            return kExitOk;
        }

        if (*gen) {
            const auto frames = gen_test_inputs(detail::parse_input_kind(kind_s), gen_w, gen_h);
            detail::ensure_dir(out_dir);
            for (std::size_t i = 0; i < frames.size(); ++i) {
                std::ostringstream name;
                name << kind_s;
                if (frames.size() > 1) name << '_' << std::setw(2) << std::setfill('0') << i;
                name << ".pgm";
                const auto path = (std::filesystem::path(out_dir) / name.str()).string();
                save_pgm(frames[i], path);
                out << path << '\n';
            }
            return kExitOk;
        }

        if (*cal) {
            if (calibrate_access_flag) {
                const auto c = build_config(cal);
                const auto res = calibrate_access(c.length, reg);
                out << "adc\t" << res.profile.adc << "\nwrite\t" << res.profile.write << "\nread\t"
                    << res.profile.read << "\ndac\t" << res.profile.dac << "\nobjective\t" << res.objective
                    << "\nmtj_vs_lfsr_reduction\t" << res.summary.mtj_vs_lfsr.mean_of_ratios
                    << "\nstochmem_vs_mtj_reduction\t" << res.summary.stochmem_vs_mtj.mean_of_ratios << '\n';
                return kExitOk;
            }
            const auto c = build_config(cal);
            const auto res = calibrate_noise(target, c, cal_seeds);
            out << "sigma\t" << res.sigma << "\nconv_mtj_percent\t" << res.measured.conv_percent
                << "\nstochmem_percent\t" << res.measured.stochmem_percent << "\ngap_pp\t" << res.measured.gap_pp()
                << "\niterations\t" << res.iterations << '\n';
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

} // namespace stochmem::cli
