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

#ifndef XDUCE_CLI_RUN_CONFIG_H
#define XDUCE_CLI_RUN_CONFIG_H

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xduce/errors.h"
#include "xduce/sweep.h"
#include "xduce/transducer.h"

/// Run configuration: a sectioned `key = value` file.
///
///     [device]   g_eo_hz
///     [mode_a]   frequency_hz + (q_i, q_ex) or (kappa_i_hz, kappa_ex_hz); same for mode_b, mode_p
///     [drive]    power_w, detuning_hz = 0, scheme = red|blue
///     [herald]   dt_s, rate_mapping = direct|c_kappa_b, r0_per_s (direct), scheme = blue, hold_time_s
///     [sweep]    power_min_w, power_max_w, points, spacing = log|linear, q_b = q1, q2, ...,
///                outputs = efficiency, cooperativity, infidelity
///     [output]   format = csv|jsonl, data, plot, plot_quantity, seed
///
/// '#' and ';' start comments. Everything given in Hz is multiplied by 2 pi here
/// and nowhere else.
namespace xduce::cli {

/// Malformed configuration. `what()` carries "path:line: [section] key: message".
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration file could not be read at all.
struct ConfigIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Jsonl };

enum class PlotQuantity { Efficiency, Cooperativity, Infidelity };

struct HeraldConfig {
    HeraldOptions options;
    Scheme scheme = Scheme::Blue;
    std::optional<double> hold_time;
};

struct SweepConfig {
    PowerAxis power;
    std::vector<double> q_b;
    SweepOutputs outputs;
};

struct OutputConfig {
    Format format = Format::Csv;
    std::optional<std::string> data;
    std::optional<std::string> plot;
    PlotQuantity plot_quantity = PlotQuantity::Efficiency;
    uint64_t seed = 1;
};

struct RunConfig {
    TransducerConfig device;
    DriveCondition drive;
    std::optional<HeraldConfig> herald;
    std::optional<SweepConfig> sweep;
    OutputConfig output;
};

namespace detail {

struct Entry {
    std::string value;
    int line;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

inline std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class IniReader {
   public:
    IniReader(std::istream &in, std::string source) : source_(std::move(source)) {
        std::string raw;
        int line_no = 0;
        Section *current = nullptr;
        std::string current_name;
        while (std::getline(in, raw)) {
            ++line_no;
            size_t comment = raw.find_first_of("#;");
            std::string line = trim(std::string_view(raw).substr(0, comment));
            if (line.empty()) {
                continue;
            }
            if (line.front() == '[') {
                if (line.back() != ']') {
                    fail(line_no, "unterminated section header");
                }
                current_name = trim(std::string_view(line).substr(1, line.size() - 2));
                if (current_name.empty()) {
                    fail(line_no, "empty section name");
                }
                if (sections_.count(current_name)) {
                    fail(line_no, "duplicate section [" + current_name + "]");
                }
                current = &sections_[current_name];
                current->line = line_no;
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos) {
                fail(line_no, "expected 'key = value'");
            }
            if (current == nullptr) {
                fail(line_no, "key outside of any section");
            }
            std::string key = trim(std::string_view(line).substr(0, eq));
            std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key.empty()) {
                fail(line_no, "empty key");
            }
            if (current->entries.count(key)) {
                fail(line_no, "[" + current_name + "] " + key + ": duplicate key");
            }
            current->entries[key] = Entry{value, line_no};
        }
    }

    [[noreturn]] void fail(int line, const std::string &message) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + message);
    }

    const Section *section(const std::string &name) const {
        auto it = sections_.find(name);
        return it == sections_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, Section> &sections() const {
        return sections_;
    }

    const std::string &source() const {
        return source_;
    }

   private:
    std::string source_;
    std::map<std::string, Section> sections_;
};

/// Typed access to one section, with diagnostics pointing at the offending line.
class SectionView {
   public:
    SectionView(const IniReader &ini, std::string name, const Section &section)
        : ini_(ini), name_(std::move(name)), section_(section) {
    }

    bool has(const std::string &key) const {
        return section_.entries.count(key) != 0;
    }

    [[noreturn]] void fail(const std::string &key, const std::string &message) const {
        auto it = section_.entries.find(key);
        int line = it == section_.entries.end() ? section_.line : it->second.line;
        ini_.fail(line, "[" + name_ + "] " + key + ": " + message);
    }

    [[noreturn]] void fail_section(const std::string &message) const {
        ini_.fail(section_.line, "[" + name_ + "]: " + message);
    }

    std::string text(const std::string &key) const {
        auto it = section_.entries.find(key);
        if (it == section_.entries.end()) {
            fail(key, "missing required key");
        }
        return it->second.value;
    }

    std::optional<std::string> maybe_text(const std::string &key) const {
        if (!has(key)) {
            return std::nullopt;
        }
        return text(key);
    }

    static std::optional<double> parse_double(std::string_view s) {
        if (!s.empty() && s.front() == '+') {
            s.remove_prefix(1);
        }
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            return std::nullopt;
        }
        return v;
    }

    double number(const std::string &key) const {
        std::string s = text(key);
        auto v = parse_double(s);
        if (!v.has_value()) {
            fail(key, "expected a number, got '" + s + "'");
        }
        return *v;
    }

    std::optional<double> maybe_number(const std::string &key) const {
        if (!has(key)) {
            return std::nullopt;
        }
        return number(key);
    }

    uint64_t unsigned_integer(const std::string &key) const {
        std::string s = text(key);
        uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            fail(key, "expected a non-negative integer, got '" + s + "'");
        }
        return v;
    }

    std::vector<std::string> list(const std::string &key) const {
        std::vector<std::string> out;
        std::stringstream ss(text(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                fail(key, "empty list element");
            }
            out.push_back(item);
        }
        if (out.empty()) {
            fail(key, "empty list");
        }
        return out;
    }

    void reject_unknown(const std::set<std::string> &allowed) const {
        for (const auto &[key, entry] : section_.entries) {
            if (!allowed.count(key)) {
                ini_.fail(entry.line, "[" + name_ + "] " + key + ": unknown key");
            }
        }
    }

    int line() const {
        return section_.line;
    }

   private:
    const IniReader &ini_;
    std::string name_;
    const Section &section_;
};

inline SectionView require_section(const IniReader &ini, const std::string &name) {
    const Section *s = ini.section(name);
    if (s == nullptr) {
        throw ConfigError(ini.source() + ": missing required section [" + name + "]");
    }
    return SectionView(ini, name, *s);
}

inline Scheme parse_scheme(const SectionView &view, const std::string &key) {
    std::string s = view.text(key);
    if (s == "red") {
        return Scheme::Red;
    }
    if (s == "blue") {
        return Scheme::Blue;
    }
    view.fail(key, "expected 'red' or 'blue', got '" + s + "'");
}

inline Mode parse_mode(const IniReader &ini, ModeLabel label) {
    std::string name = "mode_" + std::string(to_string(label));
    SectionView view = require_section(ini, name);
    view.reject_unknown({"frequency_hz", "q_i", "q_ex", "kappa_i_hz", "kappa_ex_hz"});
    double f = view.number("frequency_hz");
    if (!(f > 0) || !std::isfinite(f)) {
        view.fail("frequency_hz", "must be positive and finite");
    }
    double omega = hz_to_rad_per_s(f);
    bool by_q = view.has("q_i") || view.has("q_ex");
    bool by_kappa = view.has("kappa_i_hz") || view.has("kappa_ex_hz");
    if (by_q == by_kappa) {
        view.fail_section("give exactly one of (q_i, q_ex) or (kappa_i_hz, kappa_ex_hz)");
    }
    double kappa_i = 0;
    double kappa_ex = 0;
    if (by_q) {
        for (const char *key : {"q_i", "q_ex"}) {
            double q = view.number(key);
            if (!(q > 0)) {
                view.fail(key, "quality factor must be positive (inf for a lossless channel)");
            }
            (std::string_view(key) == "q_i" ? kappa_i : kappa_ex) = omega / q;
        }
    } else {
        for (const char *key : {"kappa_i_hz", "kappa_ex_hz"}) {
            double k = view.number(key);
            if (!(k >= 0) || !std::isfinite(k)) {
                view.fail(key, "loss rate must be non-negative and finite");
            }
            (std::string_view(key) == "kappa_i_hz" ? kappa_i : kappa_ex) = hz_to_rad_per_s(k);
        }
    }
    try {
        return Mode(label, omega, kappa_i, kappa_ex);
    } catch (const DomainError &e) {
        view.fail_section(e.what());
    }
}

inline TransducerConfig parse_device(const IniReader &ini) {
    SectionView device = require_section(ini, "device");
    device.reject_unknown({"g_eo_hz"});
    double g = device.number("g_eo_hz");
    if (!(g >= 0) || !std::isfinite(g)) {
        device.fail("g_eo_hz", "must be non-negative and finite");
    }
    return TransducerConfig(
        parse_mode(ini, ModeLabel::A), parse_mode(ini, ModeLabel::B), parse_mode(ini, ModeLabel::P),
        hz_to_rad_per_s(g));
}

inline DriveCondition parse_drive(const IniReader &ini) {
    SectionView view = require_section(ini, "drive");
    view.reject_unknown({"power_w", "detuning_hz", "scheme"});
    DriveCondition drive;
    drive.pump_power = view.number("power_w");
    if (!(drive.pump_power >= 0) || !std::isfinite(drive.pump_power)) {
        view.fail("power_w", "must be non-negative and finite");
    }
    double detuning = view.maybe_number("detuning_hz").value_or(0);
    if (!std::isfinite(detuning)) {
        view.fail("detuning_hz", "must be finite");
    }
    drive.pump_detuning = hz_to_rad_per_s(detuning);
    drive.scheme = view.has("scheme") ? parse_scheme(view, "scheme") : Scheme::Red;
    return drive;
}

inline std::optional<HeraldConfig> parse_herald(const IniReader &ini) {
    const Section *s = ini.section("herald");
    if (s == nullptr) {
        return std::nullopt;
    }
    SectionView view(ini, "herald", *s);
    view.reject_unknown({"dt_s", "rate_mapping", "r0_per_s", "scheme", "hold_time_s"});
    HeraldConfig out;
    out.options.dt = view.number("dt_s");
    if (!(out.options.dt >= 0) || !std::isfinite(out.options.dt)) {
        view.fail("dt_s", "must be non-negative and finite");
    }
    std::string mapping = view.maybe_text("rate_mapping").value_or("direct");
    if (mapping == "direct") {
        out.options.mapping = RateMapping::Direct;
        out.options.r0 = view.number("r0_per_s");
        if (!(out.options.r0 >= 0) || !std::isfinite(out.options.r0)) {
            view.fail("r0_per_s", "must be non-negative and finite");
        }
    } else if (mapping == "c_kappa_b") {
        out.options.mapping = RateMapping::CKappaB;
        if (view.has("r0_per_s")) {
            view.fail("r0_per_s", "not allowed with rate_mapping = c_kappa_b");
        }
    } else {
        view.fail("rate_mapping", "expected 'direct' or 'c_kappa_b', got '" + mapping + "'");
    }
    out.scheme = view.has("scheme") ? parse_scheme(view, "scheme") : Scheme::Blue;
    if (view.has("hold_time_s")) {
        double t = view.number("hold_time_s");
        if (!(t >= 0) || !std::isfinite(t)) {
            view.fail("hold_time_s", "must be non-negative and finite");
        }
        out.hold_time = t;
    }
    return out;
}

inline std::optional<SweepConfig> parse_sweep(const IniReader &ini) {
    const Section *s = ini.section("sweep");
    if (s == nullptr) {
        return std::nullopt;
    }
    SectionView view(ini, "sweep", *s);
    view.reject_unknown({"power_min_w", "power_max_w", "points", "spacing", "q_b", "outputs"});
    SweepConfig out;
    out.power.min = view.number("power_min_w");
    out.power.max = view.number("power_max_w");
    if (view.has("points")) {
        out.power.points = static_cast<size_t>(view.unsigned_integer("points"));
    }
    std::string spacing = view.maybe_text("spacing").value_or("log");
    if (spacing == "log") {
        out.power.spacing = Spacing::Log;
    } else if (spacing == "linear") {
        out.power.spacing = Spacing::Linear;
    } else {
        view.fail("spacing", "expected 'log' or 'linear', got '" + spacing + "'");
    }
    try {
        out.power.validate();
    } catch (const DomainError &e) {
        view.fail_section(e.what());
    }
    for (const std::string &item : view.list("q_b")) {
        auto q = SectionView::parse_double(item);
        if (!q.has_value() || !(*q > 0) || !std::isfinite(*q)) {
            view.fail("q_b", "expected positive finite quality factors, got '" + item + "'");
        }
        out.q_b.push_back(*q);
    }
    if (view.has("outputs")) {
        out.outputs = SweepOutputs{false, false, false};
        for (const std::string &item : view.list("outputs")) {
            if (item == "efficiency") {
                out.outputs.efficiency = true;
            } else if (item == "cooperativity") {
                out.outputs.cooperativity = true;
            } else if (item == "infidelity") {
                out.outputs.infidelity = true;
            } else {
                view.fail("outputs", "unknown output '" + item + "'");
            }
        }
    }
    return out;
}

inline OutputConfig parse_output(const IniReader &ini) {
    OutputConfig out;
    const Section *s = ini.section("output");
    if (s == nullptr) {
        return out;
    }
    SectionView view(ini, "output", *s);
    view.reject_unknown({"format", "data", "plot", "plot_quantity", "seed"});
    std::string format = view.maybe_text("format").value_or("csv");
    if (format == "csv") {
        out.format = Format::Csv;
    } else if (format == "jsonl") {
        out.format = Format::Jsonl;
    } else {
        view.fail("format", "expected 'csv' or 'jsonl', got '" + format + "'");
    }
    out.data = view.maybe_text("data");
    out.plot = view.maybe_text("plot");
    std::string quantity = view.maybe_text("plot_quantity").value_or("efficiency");
    if (quantity == "efficiency") {
        out.plot_quantity = PlotQuantity::Efficiency;
    } else if (quantity == "cooperativity") {
        out.plot_quantity = PlotQuantity::Cooperativity;
    } else if (quantity == "infidelity") {
        out.plot_quantity = PlotQuantity::Infidelity;
    } else {
        view.fail("plot_quantity", "expected efficiency, cooperativity or infidelity, got '" + quantity + "'");
    }
    if (view.has("seed")) {
        out.seed = view.unsigned_integer("seed");
    }
    return out;
}

}  // namespace detail

inline RunConfig parse_run_config(std::istream &in, const std::string &source) {
    detail::IniReader ini(in, source);
    static const std::set<std::string> known = {
        "device", "mode_a", "mode_b", "mode_p", "drive", "herald", "sweep", "output"};
    for (const auto &[name, section] : ini.sections()) {
        if (!known.count(name)) {
            ini.fail(section.line, "unknown section [" + name + "]");
        }
    }
    RunConfig cfg{
        detail::parse_device(ini),
        detail::parse_drive(ini),
        detail::parse_herald(ini),
        detail::parse_sweep(ini),
        detail::parse_output(ini),
    };
    if (cfg.sweep.has_value() && cfg.sweep->outputs.infidelity) {
        if (!cfg.herald.has_value()) {
            throw ConfigError(source + ": [sweep] outputs include infidelity but there is no [herald] section");
        }
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigIoError("cannot open config file '" + path + "'");
    }
    return parse_run_config(in, path);
}

}  // namespace xduce::cli

#endif
