// Copyright 2026 The qlgasim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Command-line front end: one experiment per invocation.
//
//   qlga_cli dispersion --config disp.ini --out results --seed 7
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include "CLI11.hpp"

#include "qlga/config.hpp"
#include "qlga/experiment.hpp"

namespace {

struct Options {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App *cmd, Options &opts) {
    cmd->add_option("--config", opts.config_path, "experiment configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory (overrides output.directory)");
    cmd->add_option("--seed", opts.seed, "random seed (overrides experiment.seed)");
    cmd->add_option("--threads", opts.threads, "worker threads (0: runtime default)")
        ->check(CLI::NonNegativeNumber);
}

int execute(const std::string &command, const Options &opts) {
    using namespace qlga;
    std::string text;
    if (!opts.config_path.empty()) {
        std::ifstream file(opts.config_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot read " << opts.config_path << "\n";
            return exit_code::io_error;
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        text = buffer.str();
    }

    const ExperimentKind fallback =
        command == "run" ? ExperimentKind::run_brick : experiment_kind_from_string(command);
    ExperimentConfig config;
    try {
        config = parse_config(text, fallback);
    } catch (const ConfigError &e) {
        for (const auto &err : e.errors()) {
            std::cerr << "config error: " << err << "\n";
        }
        return exit_code::config_error;
    }
    const bool matches = command == "run" ? (config.kind == ExperimentKind::run_brick ||
                                             config.kind == ExperimentKind::run_qlga)
                                          : config.kind == fallback;
    if (!matches) {
        std::cerr << "config error: experiment.kind = " << to_string(config.kind)
                  << " does not match subcommand '" << command << "'\n";
        return exit_code::config_error;
    }
    if (opts.out_dir) {
        config.directory = *opts.out_dir;
    }
    if (opts.seed) {
        config.seed = *opts.seed;
    }
    if (opts.threads > 0) {
        omp_set_num_threads(opts.threads);
    }

    const ExperimentOutcome outcome = run_experiment(config);
    for (const auto &path : outcome.files) {
        std::cout << path.string() << "\n";
    }
    if (outcome.exit_code != exit_code::ok) {
        std::cerr << "error: " << outcome.message << "\n";
    }
    return outcome.exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Brick-wall and lattice-gas Schroedinger simulator"};
    app.set_version_flag("--version", std::string(qlga::kVersion));
    app.require_subcommand(1);

    Options opts;
    const char *commands[][2] = {
        {"run", "time evolution (run-brick or run-qlga)"},
        {"dispersion", "Bloch-mode dispersion fit and mass"},
        {"converge", "continuum convergence study against a fine-grid integrator"},
        {"oracle-check", "dense versus sector representation check"},
        {"gate-count", "per-step gate accounting"},
        {"m-inverse", "density of the inverse of the non-local one-step operator"},
    };
    for (const auto &[name, help] : commands) {
        add_common(app.add_subcommand(name, help), opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qlga::exit_code::config_error;
    }
    return execute(app.get_subcommands().front()->get_name(), opts);
}
