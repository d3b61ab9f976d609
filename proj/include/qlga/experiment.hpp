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
/**
 * @file
 * Experiment runner: turns a parsed configuration into CSV and JSON
 * artifacts, written atomically, with the resolved configuration embedded
 * in every file.
 */
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlga/config.hpp"
#include "qlga/dynamics.hpp"
#include "qlga/state.hpp"

namespace qlga {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int invariant_breach = 3;
inline constexpr int io_error = 4;
} // namespace exit_code

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentOutcome {
    int exit_code = exit_code::ok;
    std::vector<std::filesystem::path> files;
    std::string message;
};

/// Lattice, dynamics and initial-state fields of the configuration.
RunConfig to_run_config(const ExperimentConfig &config);

/// External and pair potentials described by the configuration. The
/// random shape draws from the configured seed.
Potentials build_potentials(const ExperimentConfig &config, const LatticeSpec &lattice);

/// Runs the experiment and maps failures to exit codes; never throws for
/// configuration, invariant or I/O failures.
ExperimentOutcome run_experiment(const ExperimentConfig &config);

/// Writes `content` to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path &path, const std::string &content);

/// Comment block ("# ...") with the artifact version and every config entry.
std::string provenance_header(const ExperimentConfig &config);

/**
 * Snapshot of a sector state: a provenance header, a comment block with
 * num_qbits, particles, statistics and lattice, then the header row
 * "occupied,re,im" and one row per configuration with space-separated
 * occupied q-bits.
 */
std::string render_state_snapshot(const SectorState &state, const LatticeSpec &lattice,
                                  const ExperimentConfig &config);

} // namespace qlga
