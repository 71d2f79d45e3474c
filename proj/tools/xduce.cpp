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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "xduce/cli/commands.h"

using namespace xduce::cli;

int main(int argc, char **argv) {
    CLI::App app{"xduce: cavity electro-optic transduction design-space simulator"};
    app.require_subcommand(1);

    CommandOptions opt;
    std::string format;
    uint64_t mc = 0;
    uint64_t seed = 0;
    std::string plot;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "Run configuration file")->required();
        sub->add_option("--seed", seed, "RNG seed (overrides [output] seed)");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
        sub->add_flag("--dump-normalized", opt.dump_normalized, "Print the config in internal units (rad/s) and exit");
        sub->add_option("--threads", opt.threads, "Worker threads for Monte Carlo (0 = all cores)");
    };

    std::map<CLI::App *, Command> commands;
    auto *efficiency = app.add_subcommand("efficiency", "Conversion efficiency at the configured drive");
    auto *sweep = app.add_subcommand("sweep", "Power x Q_b sweep table, optional SVG plot");
    auto *herald = app.add_subcommand("herald", "Heralded-entanglement probability breakdown");
    auto *verify = app.add_subcommand("verify", "Check closed forms against the steady-state solver");
    commands[efficiency] = Command::Efficiency;
    commands[sweep] = Command::Sweep;
    commands[herald] = Command::Herald;
    commands[verify] = Command::Verify;
    for (auto &[sub, _] : commands) {
        add_common(sub);
    }
    sweep->add_option("--plot", plot, "Write an SVG plot here");
    herald->add_option("--mc", mc, "Monte Carlo samples for the blue-detuned oracle")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? EXIT_OK : EXIT_CONFIG;
    }

    for (auto &[sub, command] : commands) {
        if (!sub->parsed()) {
            continue;
        }
        if (sub->count("--seed")) {
            opt.seed = seed;
        }
        if (!format.empty()) {
            opt.format = format == "csv" ? Format::Csv : Format::Jsonl;
        }
        if (!plot.empty()) {
            opt.plot = plot;
        }
        if (sub == herald && sub->count("--mc")) {
            opt.mc_samples = mc;
        }
        return run_command(command, opt, std::cout, std::cerr);
    }
    return EXIT_CONFIG;
}
