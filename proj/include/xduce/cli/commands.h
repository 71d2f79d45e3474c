// Copyright 2026 The xduce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XDUCE_CLI_COMMANDS_H
#define XDUCE_CLI_COMMANDS_H

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xduce/cli/report.h"
#include "xduce/cli/run_config.h"
#include "xduce/cli/svg_plot.h"
#include "xduce/errors.h"
#include "xduce/heralding.h"
#include "xduce/steady_state.h"
#include "xduce/sweep.h"
#include "xduce/transducer.h"

namespace xduce::cli {

/// Process exit codes. Stable.
enum ExitCode : int {
    EXIT_OK = 0,
    EXIT_CONFIG = 2,
    EXIT_DOMAIN = 3,
    EXIT_IO = 4,
    EXIT_UNSUPPORTED = 5,
    EXIT_VERIFY_FAILED = 6,
};

enum class Command { Efficiency, Sweep, Herald, Verify };

struct CommandOptions {
    std::string config_path;
    std::optional<uint64_t> mc_samples;
    std::optional<uint64_t> seed;
    std::optional<Format> format;
    std::optional<std::string> plot;
    bool dump_normalized = false;
    unsigned threads = 0;
};

/// Relative tolerance of the steady-state oracle against the closed-form efficiency.
constexpr double VERIFY_TOLERANCE = 1e-9;
/// Random probe offsets checked by `verify` besides omega = 0.
constexpr int VERIFY_PROBES = 256;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Config with every rate in rad/s, as the library sees it.
inline nlohmann::ordered_json normalized_config_json(const RunConfig &cfg) {
    auto mode = [](const Mode &m) {
        nlohmann::ordered_json j;
        j["omega_rad_s"] = m.omega();
        j["kappa_i_rad_s"] = m.kappa_i();
        j["kappa_ex_rad_s"] = m.kappa_ex();
        j["kappa_rad_s"] = m.kappa();
        return j;
    };
    nlohmann::ordered_json j;
    j["device"]["g_eo_rad_s"] = cfg.device.g_eo();
    j["device"]["mode_a"] = mode(cfg.device.mode_a());
    j["device"]["mode_b"] = mode(cfg.device.mode_b());
    j["device"]["mode_p"] = mode(cfg.device.mode_p());
    j["drive"]["power_w"] = cfg.drive.pump_power;
    j["drive"]["detuning_rad_s"] = cfg.drive.pump_detuning;
    j["drive"]["scheme"] = std::string(to_string(cfg.drive.scheme));
    if (cfg.herald.has_value()) {
        j["herald"]["scheme"] = std::string(to_string(cfg.herald->scheme));
        j["herald"]["dt_s"] = cfg.herald->options.dt;
        j["herald"]["rate_mapping"] = std::string(to_string(cfg.herald->options.mapping));
        if (cfg.herald->options.mapping == RateMapping::Direct) {
            j["herald"]["r0_per_s"] = cfg.herald->options.r0;
        }
        if (cfg.herald->hold_time.has_value()) {
            j["herald"]["hold_time_s"] = *cfg.herald->hold_time;
        }
    }
    if (cfg.sweep.has_value()) {
        j["sweep"]["power_min_w"] = cfg.sweep->power.min;
        j["sweep"]["power_max_w"] = cfg.sweep->power.max;
        j["sweep"]["points"] = cfg.sweep->power.resolved_points();
        j["sweep"]["spacing"] = cfg.sweep->power.spacing == Spacing::Log ? "log" : "linear";
        j["sweep"]["q_b"] = cfg.sweep->q_b;
    }
    j["output"]["format"] = cfg.output.format == Format::Csv ? "csv" : "jsonl";
    j["output"]["seed"] = cfg.output.seed;
    return j;
}

namespace detail {

inline double pump_photons(const RunConfig &cfg) {
    return intracavity_photon_number(cfg.device.mode_p(), cfg.drive);
}

inline Format format_of(const RunConfig &cfg, const CommandOptions &opt) {
    return opt.format.value_or(cfg.output.format);
}

inline int efficiency(const RunConfig &cfg, const CommandOptions &opt, std::ostream &out) {
    double n_p = pump_photons(cfg);
    auto eff = conversion_efficiency(cfg.device, n_p);
    FieldValue critical = std::monostate{};
    if (cfg.device.g_eo() > 0 && cfg.device.mode_p().kappa_ex() > 0) {
        critical = critical_pump_power(cfg.device, cfg.drive.pump_detuning);
    }
    Record r{
        {"pump_power_w", cfg.drive.pump_power},
        {"n_p", n_p},
        {"cooperativity", eff.cooperativity},
        {"eta_internal", eff.eta_internal},
        {"eta", eff.eta},
        {"extraction_a", eff.extraction_a},
        {"extraction_b", eff.extraction_b},
        {"critical_pump_power_w", critical},
    };
    write_record(out, r, format_of(cfg, opt));
    return EXIT_OK;
}

inline void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << content;
    f.flush();
    if (!f) {
        throw IoError("failed writing '" + path + "'");
    }
}

inline std::string q_label(double q) {
    return "Q = " + tick_label(q);
}

inline int sweep(const RunConfig &cfg, const CommandOptions &opt, std::ostream &out, std::ostream &err) {
    if (!cfg.sweep.has_value()) {
        throw ConfigError(opt.config_path + ": sweep needs a [sweep] section");
    }
    SweepSpec spec{
        cfg.device,
        cfg.drive.pump_detuning,
        cfg.sweep->power,
        cfg.sweep->q_b,
        cfg.sweep->outputs,
        cfg.herald.has_value() ? std::optional<HeraldOptions>(cfg.herald->options) : std::nullopt,
    };
    std::vector<SweepRow> rows = run_sweep(spec);

    std::vector<Record> records;
    records.reserve(rows.size());
    for (const SweepRow &row : rows) {
        records.push_back(sweep_record(row));
    }
    std::ostringstream table;
    write_records(table, records, format_of(cfg, opt));
    if (cfg.output.data.has_value()) {
        write_text_file(*cfg.output.data, table.str());
    } else {
        out << table.str();
    }

    std::string mapping = spec.herald.has_value() ? std::string(to_string(spec.herald->mapping)) : "none";
    err << "# sweep: " << rows.size() << " rows, rate_mapping=" << mapping << '\n';

    std::optional<std::string> plot_path = opt.plot.has_value() ? opt.plot : cfg.output.plot;
    if (plot_path.has_value()) {
        PlotQuantity quantity = cfg.output.plot_quantity;
        if (quantity == PlotQuantity::Infidelity && !spec.outputs.infidelity) {
            throw ConfigError(opt.config_path + ": plot_quantity = infidelity needs infidelity in [sweep] outputs");
        }
        std::vector<PlotSeries> series;
        for (const SweepRow &row : rows) {
            if (series.empty() || series.back().label != q_label(row.q_b)) {
                series.push_back(PlotSeries{q_label(row.q_b), {}});
            }
            double y = quantity == PlotQuantity::Efficiency      ? row.eta
                       : quantity == PlotQuantity::Cooperativity ? row.cooperativity
                                                                 : row.infidelity.value_or(0);
            series.back().points.emplace_back(row.pump_power, y);
        }
        PlotAxes axes;
        axes.x_label = "pump power (W)";
        if (quantity == PlotQuantity::Efficiency) {
            axes.title = "Conversion efficiency";
            axes.y_label = "efficiency";
        } else if (quantity == PlotQuantity::Cooperativity) {
            axes.title = "Cooperativity";
            axes.y_label = "cooperativity";
        } else {
            axes.title = "Heralded entanglement infidelity (rate mapping: " + mapping + ")";
            axes.y_label = "infidelity";
            axes.log_y = true;
        }
        write_text_file(*plot_path, render_svg(series, axes));
    }
    return EXIT_OK;
}

inline int herald(const RunConfig &cfg, const CommandOptions &opt, std::ostream &out) {
    if (!cfg.herald.has_value()) {
        throw ConfigError(opt.config_path + ": herald needs a [herald] section");
    }
    const HeraldConfig &h = *cfg.herald;
    if (opt.mc_samples.has_value() && h.scheme == Scheme::Red) {
        throw UnsupportedError("--mc is only defined for the blue-detuned scheme");
    }
    double c = cooperativity(cfg.device, pump_photons(cfg));
    HeraldModel model{h.options.rate(c, cfg.device.mode_b().kappa()), h.options.dt, h.scheme};
    HeraldBreakdown b = herald_breakdown(model);

    Record r{
        {"scheme", std::string(to_string(h.scheme))},
        {"rate_mapping", std::string(to_string(h.options.mapping))},
        {"r0_per_s", model.r0},
        {"dt_s", model.dt},
        {"mu", model.mu()},
        {"p0", b.p0},
        {"p1", optional_value(b.p1)},
        {"p11", b.p11},
        {"pmn", b.pmn},
        {"infidelity", b.infidelity},
    };
    if (h.scheme == Scheme::Blue) {
        r.push_back({"poisson_exact", poisson_error_probability(model.mu())});
    }
    if (h.hold_time.has_value()) {
        r.push_back({"storage_loss", storage_loss_infidelity(cfg.device.mode_b().kappa_i(), *h.hold_time)});
    }
    if (opt.mc_samples.has_value()) {
        uint64_t seed = opt.seed.value_or(cfg.output.seed);
        McEstimate mc = mc_blue_infidelity(model, *opt.mc_samples, seed, opt.threads);
        double gap = b.infidelity - mc.infidelity_mean;
        double gap_se = mc.standard_error > 0 ? gap / mc.standard_error
                        : gap == 0            ? 0.0
                                              : std::copysign(std::numeric_limits<double>::infinity(), gap);
        r.push_back({"mc_samples", mc.samples});
        r.push_back({"mc_seed", mc.seed});
        r.push_back({"mc_infidelity", mc.infidelity_mean});
        r.push_back({"mc_standard_error", mc.standard_error});
        r.push_back({"mc_gap_se", gap_se});
    }
    write_record(out, r, format_of(cfg, opt));
    return EXIT_OK;
}

inline double relative_deviation(double numeric, double closed_form) {
    double diff = std::abs(numeric - closed_form);
    return closed_form != 0 ? diff / std::abs(closed_form) : diff;
}

inline int verify(const RunConfig &cfg, const CommandOptions &opt, std::ostream &out, std::ostream &err) {
    double n_p = pump_photons(cfg);
    auto eff = conversion_efficiency(cfg.device, n_p);
    LinearizedSystem red = build_linearized(cfg.device, n_p, Scheme::Red);
    ScatteringPoint on_resonance = scattering_at(red, 0);
    double deviation = relative_deviation(on_resonance.conversion, eff.eta);

    // Alternate probes between the microwave-limited and the optical linewidth scale.
    double narrow = red.kappa_b() * (1 + eff.cooperativity) / 2;
    double wide = std::max(narrow, red.kappa_a() / 2);
    std::mt19937_64 rng(opt.seed.value_or(cfg.output.seed));
    std::uniform_real_distribution<double> unit(-1, 1);
    double max_conversion = on_resonance.conversion;
    double max_reciprocity = 0;
    for (int k = 0; k < VERIFY_PROBES; ++k) {
        double w = 10 * (k % 2 == 0 ? narrow : wide) * unit(rng);
        ScatteringPoint s = scattering_at(red, w);
        max_conversion = std::max(max_conversion, s.conversion);
        double ab = std::abs(s.amplitude_ab);
        double ba = std::abs(s.amplitude_ba);
        double scale = std::max(ab, ba);
        max_reciprocity = std::max(max_reciprocity, scale > 0 ? std::abs(ab - ba) / scale : 0.0);
    }
    bool passed = deviation <= VERIFY_TOLERANCE && max_conversion <= 1 + 1e-12 && max_reciprocity <= 1e-9;

    LinearizedSystem blue = build_linearized(cfg.device, n_p, Scheme::Blue);
    ParametricThreshold threshold = parametric_threshold(blue);
    bool blue_unstable = eff.cooperativity >= threshold.cooperativity;
    if (cfg.drive.scheme == Scheme::Blue && blue_unstable) {
        err << "# blue-detuned system is unstable: C = " << format_double(eff.cooperativity)
            << " >= parametric threshold C = " << format_double(threshold.cooperativity) << '\n';
    }

    Record r{
        {"scheme", std::string(to_string(cfg.drive.scheme))},
        {"cooperativity", eff.cooperativity},
        {"eta", eff.eta},
        {"conversion_numeric", on_resonance.conversion},
        {"max_relative_deviation", deviation},
        {"tolerance", VERIFY_TOLERANCE},
        {"probes", static_cast<uint64_t>(VERIFY_PROBES)},
        {"max_red_conversion", max_conversion},
        {"max_reciprocity_error", max_reciprocity},
        {"threshold_cooperativity", threshold.cooperativity},
        {"pump_scale_to_threshold", threshold.pump_scale},
        {"blue_unstable", blue_unstable},
        {"passed", passed},
    };
    write_record(out, r, format_of(cfg, opt));
    return passed ? EXIT_OK : EXIT_VERIFY_FAILED;
}

}  // namespace detail

/// Runs one subcommand. Every failure is reported on `err` and mapped to an ExitCode.
inline int run_command(Command command, const CommandOptions &opt, std::ostream &out, std::ostream &err) {
    try {
        RunConfig cfg = load_run_config(opt.config_path);
        if (opt.dump_normalized) {
            out << normalized_config_json(cfg).dump(2) << '\n';
            return EXIT_OK;
        }
        switch (command) {
            case Command::Efficiency:
                return detail::efficiency(cfg, opt, out);
            case Command::Sweep:
                return detail::sweep(cfg, opt, out, err);
            case Command::Herald:
                return detail::herald(cfg, opt, out);
            case Command::Verify:
                return detail::verify(cfg, opt, out, err);
        }
        return EXIT_OK;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return EXIT_CONFIG;
    } catch (const ConfigIoError &e) {
        err << "i/o error: " << e.what() << '\n';
        return EXIT_IO;
    } catch (const IoError &e) {
        err << "i/o error: " << e.what() << '\n';
        return EXIT_IO;
    } catch (const UnsupportedError &e) {
        err << "unsupported: " << e.what() << '\n';
        return EXIT_UNSUPPORTED;
    } catch (const DomainError &e) {
        err << "domain error: " << e.what() << '\n';
        return EXIT_DOMAIN;
    } catch (const UsageError &e) {
        err << "unsupported: " << e.what() << '\n';
        return EXIT_UNSUPPORTED;
    }
}

}  // namespace xduce::cli

#endif
