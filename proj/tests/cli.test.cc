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

#include "xduce/cli/commands.h"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "oracles.h"

using namespace xduce;
using namespace xduce::cli;

namespace {

const std::string SOURCE_DIR = XDUCE_SOURCE_DIR;

std::string fixture(const std::string &name) {
    return SOURCE_DIR + "/configs/" + name;
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class TempDir {
   public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("xduce_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::filesystem::remove_all(path_);
    }
    std::string file(const std::string &name, const std::string &content) const {
        std::string p = (path_ / name).string();
        std::ofstream(p) << content;
        return p;
    }
    std::string path(const std::string &name) const {
        return (path_ / name).string();
    }

   private:
    std::filesystem::path path_;
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(Command command, CommandOptions opt) {
    std::ostringstream out, err;
    int code = run_command(command, opt, out, err);
    return {code, out.str(), err.str()};
}

Run run(Command command, const std::string &config) {
    CommandOptions opt;
    opt.config_path = config;
    return run(command, opt);
}

nlohmann::json jsonl_record(Command command, const std::string &config) {
    CommandOptions opt;
    opt.config_path = config;
    opt.format = Format::Jsonl;
    auto r = run(command, opt);
    EXPECT_EQ(r.code, EXIT_OK) << r.err;
    return nlohmann::json::parse(r.out);
}

using Edits = std::vector<std::pair<std::string, std::string>>;

/// Fixture text with lines replaced (matched by prefix); an empty replacement drops the line.
std::string edit_fixture(const std::string &name, const Edits &edits) {
    std::istringstream in(read_file(fixture(name)));
    std::string line, out;
    while (std::getline(in, line)) {
        bool replaced = false;
        for (const auto &[prefix, replacement] : edits) {
            if (line.rfind(prefix, 0) == 0) {
                if (!replacement.empty()) {
                    out += replacement + "\n";
                }
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            out += line + "\n";
        }
    }
    return out;
}

std::string edit_fixture(const std::string &name, const std::string &prefix, const std::string &replacement) {
    return edit_fixture(name, Edits{{prefix, replacement}});
}

std::vector<std::string> split_lines(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<double> csv_numbers(const std::string &line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell.empty() ? NAN : std::stod(cell));
    }
    return out;
}

}  // namespace

TEST(cli_config, fixture_is_normalized_to_rad_per_s) {
    RunConfig cfg = load_run_config(fixture("fixture.ini"));
    EXPECT_EQ(cfg.device.g_eo(), TWO_PI * 20);
    EXPECT_EQ(cfg.device.mode_a().omega(), TWO_PI * 193.5e12);
    EXPECT_EQ(cfg.device.mode_a().kappa_i(), TWO_PI * 50e6);
    EXPECT_EQ(cfg.device.mode_b().kappa_i(), TWO_PI * 9e9 / 2e8);
    EXPECT_EQ(cfg.drive.pump_power, 1e-4);
    EXPECT_EQ(cfg.drive.scheme, Scheme::Red);
    ASSERT_TRUE(cfg.herald.has_value());
    EXPECT_EQ(cfg.herald->options.mapping, RateMapping::CKappaB);
    ASSERT_TRUE(cfg.sweep.has_value());
    EXPECT_EQ(cfg.sweep->q_b, (std::vector<double>{1e7, 1e8, 1e9}));
    EXPECT_TRUE(cfg.sweep->outputs.infidelity);
    EXPECT_EQ(cfg.output.seed, 20260101u);

    CommandOptions opt;
    opt.config_path = fixture("fixture.ini");
    opt.dump_normalized = true;
    auto r = run(Command::Efficiency, opt);
    ASSERT_EQ(r.code, EXIT_OK);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["device"]["g_eo_rad_s"].get<double>(), TWO_PI * 20);
    EXPECT_EQ(j["device"]["mode_p"]["omega_rad_s"].get<double>(), TWO_PI * 193.5e12);
    EXPECT_EQ(j["device"]["mode_a"]["kappa_ex_rad_s"].get<double>(), TWO_PI * 50e6);
}

TEST(cli_config, hz_detuning_converted_once) {
    TempDir tmp;
    auto path = tmp.file("c.ini", edit_fixture("fixture.ini", "detuning_hz", "detuning_hz = 1e6"));
    RunConfig cfg = load_run_config(path);
    EXPECT_EQ(cfg.drive.pump_detuning, TWO_PI * 1e6);
}

TEST(cli_config, diagnostics_name_line_and_field) {
    TempDir tmp;
    struct Case {
        std::string text;
        std::string needle;
    };
    std::vector<Case> cases = {
        {edit_fixture("fixture.ini", "g_eo_hz", "g_eo_hz = twenty"), ":5: [device] g_eo_hz: expected a number"},
        {edit_fixture("fixture.ini", "g_eo_hz", ""), "[device] g_eo_hz: missing required key"},
        {edit_fixture("fixture.ini", "power_w", "power_w = 1e-4\nvoltage = 3"), "[drive] voltage: unknown key"},
        {edit_fixture("fixture.ini", "q_i", "q_i = 2e8\nkappa_i_hz = 1"), "give exactly one of"},
        {edit_fixture("fixture.ini", "q_i", ""), "[mode_b] q_i: missing required key"},
        {edit_fixture("fixture.ini", "q_i", "q_i = -5"), "[mode_b] q_i: quality factor must be positive"},
        {edit_fixture("fixture.ini", "scheme = red", "scheme = green"), "[drive] scheme: expected 'red' or 'blue'"},
        {edit_fixture("fixture.ini", "[output]", "[plot]"), "unknown section [plot]"},
        {edit_fixture("fixture.ini", "rate_mapping", "rate_mapping = linear"), "[herald] rate_mapping"},
        {edit_fixture("fixture.ini", "q_b", "q_b = 1e7, , 1e9"), "[sweep] q_b: empty list element"},
        {edit_fixture("fixture.ini", "power_max_w", "power_max_w = 1e-7"), "[sweep]: power axis"},
        {edit_fixture("fixture.ini", "[mode_p]", "[mode_p"), "unterminated section header"},
        {"power_w = 3\n", "key outside of any section"},
        {edit_fixture("fixture.ini", "[mode_p]", ""), "[mode_b] frequency_hz: duplicate key"},
        {edit_fixture("fixture.ini", "[mode_p]", "[mode_q]"), "unknown section [mode_q]"},
    };
    for (const auto &c : cases) {
        auto path = tmp.file("bad.ini", c.text);
        auto r = run(Command::Efficiency, path);
        EXPECT_EQ(r.code, EXIT_CONFIG) << c.needle;
        EXPECT_NE(r.err.find(c.needle), std::string::npos) << "stderr was: " << r.err;
        EXPECT_TRUE(r.out.empty());
    }
}

TEST(cli_config, missing_file_is_io_error) {
    auto r = run(Command::Efficiency, "/nonexistent/xduce.ini");
    EXPECT_EQ(r.code, EXIT_IO);
}

TEST(cli_efficiency, worked_example) {
    auto j = jsonl_record(Command::Efficiency, fixture("worked_example.ini"));
    // Hand evaluation in 30-digit arithmetic: 9 GHz mode, kappa_b = 0.5 rad/s (2 s lifetime).
    EXPECT_LE(oracle::relative_error(j["cooperativity"].get<double>(), 4.991636772934323), 1e-12);
    EXPECT_LE(oracle::relative_error(j["eta"].get<double>(), 0.13904392552114016), 1e-12);

    RunConfig cfg = load_run_config(fixture("worked_example.ini"));
    EXPECT_NEAR(kappa_to_lifetime(cfg.device.mode_b().kappa()), 2.0, 1e-12);
    double n_p = intracavity_photon_number(cfg.device.mode_p(), cfg.drive);
    auto eff = conversion_efficiency(cfg.device, n_p);
    EXPECT_EQ(j["n_p"].get<double>(), n_p);
    EXPECT_EQ(j["cooperativity"].get<double>(), eff.cooperativity);
    EXPECT_EQ(j["eta_internal"].get<double>(), eff.eta_internal);
    EXPECT_EQ(j["eta"].get<double>(), eff.eta);
    EXPECT_EQ(j["extraction_a"].get<double>(), 0.5);
    EXPECT_EQ(j["critical_pump_power_w"].get<double>(), critical_pump_power(cfg.device, 0));
}

TEST(cli_efficiency, critical_coupling_and_zero_power) {
    RunConfig cfg = load_run_config(fixture("fixture.ini"));
    double critical = critical_pump_power(cfg.device, 0);
    TempDir tmp;
    auto at_critical =
        tmp.file("crit.ini", edit_fixture("fixture.ini", "power_w", "power_w = " + format_double(critical)));
    auto j = jsonl_record(Command::Efficiency, at_critical);
    EXPECT_EQ(j["eta_internal"].get<double>(), 1.0);

    auto zero = tmp.file("zero.ini", edit_fixture("fixture.ini", "power_w", "power_w = 0"));
    auto z = jsonl_record(Command::Efficiency, zero);
    EXPECT_EQ(z["pump_power_w"].get<double>(), 0);
    EXPECT_EQ(z["n_p"].get<double>(), 0);
    EXPECT_EQ(z["cooperativity"].get<double>(), 0);
    EXPECT_EQ(z["eta_internal"].get<double>(), 0);
    EXPECT_EQ(z["eta"].get<double>(), 0);

    auto csv = run(Command::Efficiency, zero);
    ASSERT_EQ(csv.code, EXIT_OK);
    auto lines = split_lines(csv.out);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "pump_power_w,n_p,cooperativity,eta_internal,eta,extraction_a,extraction_b,critical_pump_power_w");
    EXPECT_EQ(lines[1].substr(0, 14), "0,0,0,0,0,0.5,");
}

TEST(cli_sweep, degenerate_sweep) {
    TempDir tmp;
    std::string one = edit_fixture(
        "fixture.ini",
        Edits{{"q_b", "q_b = 1e8"}, {"power_min_w", "power_min_w = 5e-5"}, {"power_max_w", "power_max_w = 1e-4"},
              {"points", "points = 2"}});
    auto r = run(Command::Sweep, tmp.file("one.ini", one));
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], SWEEP_CSV_HEADER);
    auto cells = csv_numbers(lines[2]);
    ASSERT_EQ(cells.size(), 7u);
    RunConfig cfg = load_run_config(fixture("fixture.ini"));
    auto dev = with_microwave_q(cfg.device, 1e8);
    double n_p = intracavity_photon_number(dev.mode_p(), DriveCondition{1e-4, 0, Scheme::Red});
    EXPECT_EQ(cells[0], 1e-4);
    EXPECT_EQ(cells[1], 1e8);
    EXPECT_EQ(cells[2], n_p);
    EXPECT_EQ(cells[5], conversion_efficiency(dev, n_p).eta);
    EXPECT_NE(r.err.find("rate_mapping=c_kappa_b"), std::string::npos);
}

TEST(cli_sweep, golden_csv) {
    TempDir tmp;
    std::string golden = read_file(SOURCE_DIR + "/tests/golden/fixture_sweep.csv");
    ASSERT_FALSE(golden.empty());
    auto first = run(Command::Sweep, fixture("fixture.ini"));
    auto second = run(Command::Sweep, fixture("fixture.ini"));
    ASSERT_EQ(first.code, EXIT_OK) << first.err;
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(first.out, golden);

    // Spot-check rows against direct library calls.
    RunConfig cfg = load_run_config(fixture("fixture.ini"));
    auto lines = split_lines(golden);
    ASSERT_EQ(lines.size(), 1u + 3u * 41u);
    for (size_t k : {1u, 62u, 123u}) {
        auto cells = csv_numbers(lines[k]);
        auto dev = with_microwave_q(cfg.device, cells[1]);
        double n_p = intracavity_photon_number(dev.mode_p(), DriveCondition{cells[0], 0, Scheme::Red});
        auto eff = conversion_efficiency(dev, n_p);
        EXPECT_EQ(cells[2], n_p);
        EXPECT_EQ(cells[3], eff.cooperativity);
        EXPECT_EQ(cells[4], eff.eta_internal);
        EXPECT_EQ(cells[5], eff.eta);
        HeraldModel m{eff.cooperativity * dev.mode_b().kappa(), cfg.herald->options.dt, Scheme::Blue};
        EXPECT_EQ(cells[6], blue_breakdown(m).infidelity);
    }
}

TEST(cli_sweep, jsonl_rows_share_field_names) {
    CommandOptions opt;
    opt.config_path = fixture("fixture.ini");
    opt.format = Format::Jsonl;
    auto r = run(Command::Sweep, opt);
    ASSERT_EQ(r.code, EXIT_OK);
    auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 123u);
    auto j = nlohmann::ordered_json::parse(lines[0]);
    std::string keys;
    for (auto it = j.begin(); it != j.end(); ++it) {
        keys += (keys.empty() ? "" : ",") + it.key();
    }
    EXPECT_EQ(keys, SWEEP_CSV_HEADER);
}

TEST(cli_sweep, data_file_and_svg) {
    TempDir tmp;
    std::string cfg_text = edit_fixture("fixture.ini", "format = csv", "format = csv\ndata = " + tmp.path("rows.csv"));
    auto path = tmp.file("c.ini", cfg_text);
    CommandOptions opt;
    opt.config_path = path;
    opt.plot = tmp.path("plot.svg");
    auto r = run(Command::Sweep, opt);
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(read_file(tmp.path("rows.csv")), read_file(SOURCE_DIR + "/tests/golden/fixture_sweep.csv"));

    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(tmp.path("plot.svg"), tree);
    const auto &svg = tree.get_child("svg");
    EXPECT_EQ(svg.get<std::string>("<xmlattr>.viewBox"), "0 0 800 600");
    int paths = 0;
    std::vector<std::string> labels;
    for (const auto &[name, child] : svg) {
        if (name == "path") {
            ++paths;
            EXPECT_FALSE(child.get<std::string>("<xmlattr>.d").empty());
        }
        if (name == "text") {
            labels.push_back(child.data());
        }
    }
    EXPECT_EQ(paths, 3);
    for (const char *q : {"Q = 1e+07", "Q = 1e+08", "Q = 1e+09"}) {
        EXPECT_NE(std::find(labels.begin(), labels.end(), q), labels.end()) << q;
    }
}

TEST(cli_sweep, infidelity_plot_is_log_log) {
    TempDir tmp;
    auto path = tmp.file("c.ini", edit_fixture("fixture.ini", "format = csv", "format = csv\nplot_quantity = infidelity"));
    CommandOptions opt;
    opt.config_path = path;
    opt.plot = tmp.path("inf.svg");
    ASSERT_EQ(run(Command::Sweep, opt).code, EXIT_OK);
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(tmp.path("inf.svg"), tree);
    int paths = 0;
    for (const auto &[name, child] : tree.get_child("svg")) {
        paths += name == "path";
    }
    EXPECT_EQ(paths, 3);
}

TEST(cli_sweep, unwritable_output_is_io_error) {
    CommandOptions opt;
    opt.config_path = fixture("fixture.ini");
    opt.plot = "/nonexistent-dir/plot.svg";
    EXPECT_EQ(run(Command::Sweep, opt).code, EXIT_IO);

    TempDir tmp;
    auto path = tmp.file("c.ini", edit_fixture("fixture.ini", "format = csv", "format = csv\ndata = /nonexistent-dir/x.csv"));
    EXPECT_EQ(run(Command::Sweep, path).code, EXIT_IO);
}

TEST(cli_sweep, requires_sweep_section_and_domain_errors_map_to_3) {
    EXPECT_EQ(run(Command::Sweep, fixture("worked_example.ini")).code, EXIT_CONFIG);
    TempDir tmp;
    auto path = tmp.file("c.ini", edit_fixture("fixture.ini", "dt_s", "dt_s = 1"));
    auto r = run(Command::Sweep, path);
    EXPECT_EQ(r.code, EXIT_DOMAIN);
    EXPECT_NE(r.err.find("q_b="), std::string::npos);
}

TEST(cli_herald, blue_breakdown_at_mu_0_1) {
    auto j = jsonl_record(Command::Herald, fixture("blue_herald.ini"));
    EXPECT_NEAR(j["mu"].get<double>(), 0.1, 1e-15);
    EXPECT_NEAR(j["infidelity"].get<double>(), 0.0175450, 1e-7);
    EXPECT_NEAR(j["p1"].get<double>(), 0.0904837, 1e-7);
    EXPECT_NEAR(j["poisson_exact"].get<double>(), oracle::truncated_poisson_error_probability(0.1), 1e-12);
    EXPECT_EQ(j["scheme"], "blue");
    EXPECT_EQ(j["rate_mapping"], "direct");
}

TEST(cli_herald, monte_carlo_is_reproducible) {
    CommandOptions opt;
    opt.config_path = fixture("blue_herald.ini");
    opt.mc_samples = 1000000;
    opt.seed = 99;
    opt.format = Format::Jsonl;
    auto a = run(Command::Herald, opt);
    opt.threads = 1;
    auto b = run(Command::Herald, opt);
    ASSERT_EQ(a.code, EXIT_OK) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["mc_samples"].get<uint64_t>(), 1000000u);
    EXPECT_EQ(j["mc_seed"].get<uint64_t>(), 99u);
    double gap = j["mc_gap_se"].get<double>();
    double expected = (j["infidelity"].get<double>() - j["mc_infidelity"].get<double>()) /
                      j["mc_standard_error"].get<double>();
    EXPECT_DOUBLE_EQ(gap, expected);
}

TEST(cli_herald, zero_rate_and_red_scheme) {
    TempDir tmp;
    auto zero = tmp.file("z.ini", edit_fixture("blue_herald.ini", "r0_per_s", "r0_per_s = 0"));
    CommandOptions opt;
    opt.config_path = zero;
    opt.mc_samples = 10000;
    opt.format = Format::Jsonl;
    auto r = run(Command::Herald, opt);
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["infidelity"].get<double>(), 0);
    EXPECT_EQ(j["mc_infidelity"].get<double>(), 0);
    EXPECT_EQ(j["mc_gap_se"].get<double>(), 0);

    auto red = tmp.file("r.ini", edit_fixture("blue_herald.ini", "scheme = blue", "scheme = red"));
    opt.config_path = red;
    auto with_mc = run(Command::Herald, opt);
    EXPECT_EQ(with_mc.code, EXIT_UNSUPPORTED);
    opt.mc_samples.reset();
    auto plain = run(Command::Herald, opt);
    ASSERT_EQ(plain.code, EXIT_OK) << plain.err;
    auto jr = nlohmann::json::parse(plain.out);
    EXPECT_TRUE(jr["p1"].is_null());
    EXPECT_NEAR(jr["infidelity"].get<double>(), 0.8187307530779818, 1e-15);

    EXPECT_EQ(run(Command::Herald, fixture("worked_example.ini")).code, EXIT_CONFIG);
}

TEST(cli_herald, storage_loss_reported) {
    auto j = jsonl_record(Command::Herald, fixture("fixture.ini"));
    RunConfig cfg = load_run_config(fixture("fixture.ini"));
    EXPECT_EQ(j["storage_loss"].get<double>(), storage_loss_infidelity(cfg.device.mode_b().kappa_i(), 1e-3));
    EXPECT_EQ(j["rate_mapping"], "c_kappa_b");
}

TEST(cli_verify, shipped_fixture_passes) {
    auto j = jsonl_record(Command::Verify, fixture("fixture.ini"));
    EXPECT_LE(j["max_relative_deviation"].get<double>(), 1e-9);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_NEAR(j["threshold_cooperativity"].get<double>(), 1.0, 1e-15);
    EXPECT_EQ(run(Command::Verify, fixture("worked_example.ini")).code, EXIT_OK);
}

TEST(cli_verify, blue_beyond_threshold_reports_instability) {
    TempDir tmp;
    std::string edited =
        edit_fixture("fixture.ini", Edits{{"scheme = red", "scheme = blue"}, {"power_w", "power_w = 1e-3"}});
    CommandOptions opt;
    opt.config_path = tmp.file("blue.ini", edited);
    opt.format = Format::Jsonl;
    auto r = run(Command::Verify, opt);
    EXPECT_EQ(r.code, EXIT_OK);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["cooperativity"].get<double>(), 1);
    EXPECT_TRUE(j["blue_unstable"].get<bool>());
    EXPECT_NEAR(j["threshold_cooperativity"].get<double>(), 1.0, 1e-9);
    EXPECT_NE(r.err.find("unstable"), std::string::npos);
}

TEST(cli_verify, zero_coupling) {
    TempDir tmp;
    auto path = tmp.file("g0.ini", edit_fixture("fixture.ini", "g_eo_hz", "g_eo_hz = 0"));
    auto j = jsonl_record(Command::Verify, path);
    EXPECT_EQ(j["conversion_numeric"].get<double>(), 0);
    EXPECT_EQ(j["eta"].get<double>(), 0);
    EXPECT_EQ(j["max_relative_deviation"].get<double>(), 0);
    EXPECT_EQ(j["pump_scale_to_threshold"], "inf");

    auto eff = jsonl_record(Command::Efficiency, path);
    EXPECT_TRUE(eff["critical_pump_power_w"].is_null());
}

TEST(cli_report, format_double_round_trips) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 10000; ++k) {
        double v = oracle::log_uniform(rng, 1e-300, 1e300);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1e-4), "1e-04");
    EXPECT_EQ(format_double(2.5e8), "2.5e+08");
    EXPECT_EQ(format_double(INFINITY), "inf");
}
