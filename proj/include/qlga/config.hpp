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
 * Experiment configuration: a sectioned key-value text format, parsed
 * with full validation and rendered back losslessly.
 *
 * Example:
 *
 *     [experiment]
 *     kind = dispersion
 *     seed = 7
 *
 *     [kinetic]
 *     a = 0+0.70710678118654757j
 *     b = 0.70710678118654757
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qlga/dynamics.hpp"
#include "qlga/gates.hpp"
#include "qlga/lattice.hpp"
#include "qlga/state.hpp"

namespace qlga {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExperimentKind { run_brick, run_qlga, dispersion, converge, oracle_check, gate_count, m_inverse };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view text);

enum class ExternalShape { none, harmonic, well, random };
enum class PairShape { none, contact, gaussian };
enum class Representation { sector, dense };

/// Thrown by parse_config; carries every problem found, one per entry.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string> &errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::run_brick;
    std::uint64_t seed = 0;

    // [lattice]
    int dimension = 1;
    int sites = 64;
    double epsilon = 0.125;
    LatticeMode mode = LatticeMode::brick1d;

    // [kinetic]
    cplx a{0.0, 0.70710678118654757};
    cplx b{0.70710678118654757, 0.0};
    double phi = 0.0;

    // [collision]
    cplx mu{1.0, 0.0};
    cplx nu{0.0, 1.0};
    cplx lambda{0.7648421872844885, 0.644217687237691};
    double phi_onsite = 0.0;

    // [potentials]
    ExternalShape external = ExternalShape::none;
    double external_strength = 0.0;
    double external_center = 0.0;
    int external_modes = 3;
    PairShape pair = PairShape::none;
    double pair_strength = 0.0;
    double pair_range = 1.0;
    PairCadence pair_cadence = PairCadence::per_pass;

    // [initial]
    InitialKind initial = InitialKind::gaussian;
    std::vector<QbitIndex> occupied{0};
    double x0 = 4.0;
    double sigma = 1.0;
    double k0 = 0.0;
    double x1 = 2.0;
    double k1 = 0.0;

    // [run]
    Statistics statistics = Statistics::hard_boson;
    std::size_t steps = 100;
    std::size_t observe_every = 0;
    bool record_density = false;
    Representation representation = Representation::sector;
    std::size_t samples = 0;

    // [dispersion]
    std::vector<int> k_list{0, 1, 2, 3};
    std::size_t dispersion_steps = 1;

    // [converge]
    double converge_length = 16.0;
    int converge_base_sites = 64;
    int converge_levels = 3;
    double converge_time = 2.0;
    double converge_x0 = 8.0;
    double converge_sigma = 1.5;
    double converge_k0 = 1.0;
    double converge_well_depth = 0.0;
    int converge_fine_factor = 4;
    double converge_oracle_dt = 5e-4;

    // [gate_count]
    std::size_t gate_particles = 1;

    // [m_inverse]
    std::vector<int> m_sites{16, 64, 256};
    double m_threshold = 1e-10;

    // [output]
    std::string directory = ".";
    std::string prefix = "qlga";

    // [tolerances]
    double algebraic_tol = kAlgebraicTol;
    double drift_tol = kDriftTol;
    std::size_t dense_limit = kDefaultDenseLimit;

    bool operator==(const ExperimentConfig &) const = default;
};

/**
 * Parses and validates a configuration. `default_kind` is used when the
 * text has no experiment.kind. Throws ConfigError listing every unknown
 * key (with the closest known key), malformed value and violated
 * constraint.
 */
ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> default_kind = std::nullopt);

/// Full resolved configuration in the same format, every key present.
std::string render_config(const ExperimentConfig &config);

/// (section.key, value) pairs in render order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig &config);

/// "re+imj" with 17 significant digits, and its inverse.
std::string format_complex(cplx value);
std::optional<cplx> parse_complex(std::string_view text);

/// Decimal text with 17 significant digits.
std::string format_double(double value);

/// Levenshtein distance, used for key suggestions.
std::size_t edit_distance(std::string_view lhs, std::string_view rhs);

} // namespace qlga
