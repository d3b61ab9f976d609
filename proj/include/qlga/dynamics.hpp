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
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlga/gates.hpp"
#include "qlga/lattice.hpp"
#include "qlga/state.hpp"

namespace qlga {

class DynamicsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a run drifts outside its conservation tolerances.
class InvariantBreach : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// External potential U(x), one value per lattice site.
struct PotentialField {
    std::vector<double> values;
};

/// Symmetric pair potential U(x, y) stored as a sites x sites table.
class PairPotential {
  public:
    PairPotential(std::size_t sites, std::vector<double> table);

    std::size_t sites() const { return sites_; }
    double operator()(std::size_t x, std::size_t y) const { return table_[x * sites_ + y]; }

  private:
    std::size_t sites_;
    std::vector<double> table_;
};

/// How often the pair-potential pass runs in the brick model.
enum class PairCadence {
    per_pass,        ///< after every M-pass, angle eps^2 U
    per_double_step, ///< after every M1 pass only, angle 2 eps^2 U
};

struct Potentials {
    std::optional<PotentialField> external;
    std::optional<PairPotential> pair;
    PairCadence cadence = PairCadence::per_pass;
};

/// Multiplies each occupied q-bit at site x by exp(-i eps^2 U(x)).
template <typename State>
void external_potential_pass(State &state, const LatticeSpec &lattice, const PotentialField &field,
                             double angle_scale = 1.0);

/// Multiplies every pair of occupied q-bits at sites (x, y) by
/// exp(-i eps^2 U(x, y)). Pairs of q-bits on the same site use U(x, x).
template <typename State>
void pair_potential_pass(State &state, const LatticeSpec &lattice, const PairPotential &pair,
                         double angle_scale = 1.0);

enum class BrickParity {
    even, ///< M1: pairs (2j, 2j+1)
    odd,  ///< M2: pairs (2j+1, 2j+2 mod l)
};

/// One-dimensional brick-wall rule. Each pass applies the s-gate over one
/// pairing, then the external phase, then (per cadence) the pair phase.
class BrickStepper {
  public:
    BrickStepper(LatticeSpec lattice, KineticParams params, double phi = 0.0,
                 Potentials potentials = {});

    const LatticeSpec &lattice() const { return lattice_; }
    const TwoQbitGate &s_gate() const { return s_gate_; }

    template <typename State> void step(State &state, BrickParity parity) const;
    /// Pass t of a run: M2 on even t, M1 on odd t.
    template <typename State> void pass(State &state, std::size_t t) const {
        step(state, t % 2 == 0 ? BrickParity::odd : BrickParity::even);
    }

  private:
    LatticeSpec lattice_;
    TwoQbitGate s_gate_;
    Potentials potentials_;
    PairSchedule even_;
    PairSchedule odd_;
};

template <typename State>
void step_brick(State &state, const LatticeSpec &lattice, const KineticParams &params,
                const Potentials &potentials, BrickParity parity, double phi = 0.0) {
    BrickStepper(lattice, params, phi, potentials).step(state, parity);
}

/// d-dimensional lattice-gas step: advection by exchange gates, then the
/// lifted collision on every site, then the potential passes.
class QlgaStepper {
  public:
    QlgaStepper(LatticeSpec lattice, const CollisionSpec &collision, Potentials potentials = {});
    QlgaStepper(LatticeSpec lattice, Eigen::MatrixXcd collision_lift, Statistics stats,
                Potentials potentials = {});

    const LatticeSpec &lattice() const { return lattice_; }
    const Eigen::MatrixXcd &collision_lift() const { return lift_; }

    template <typename State> void advect(State &state) const;
    template <typename State> void collide(State &state) const;
    template <typename State> void step(State &state) const;

  private:
    LatticeSpec lattice_;
    Eigen::MatrixXcd lift_;
    TwoQbitGate exchange_;
    Potentials potentials_;
    std::vector<PairSchedule> advection_;
    bool identity_collision_ = false;
};

template <typename State>
void qlga_step(State &state, const LatticeSpec &lattice, const Eigen::MatrixXcd &collision_lift,
               Statistics stats, const Potentials &potentials = {}) {
    QlgaStepper(lattice, collision_lift, stats, potentials).step(state);
}

// --- runs ----------------------------------------------------------------------

enum class InitialKind { basis, gaussian, gaussian_pair };

/// Initial state descriptor. Gaussian packets are centred at `x0` with
/// width `sigma` and mean wave number `k0` along axis 0; the pair variant
/// places a second packet at `x1` with wave number `k1` and (anti)symmetrizes.
struct InitialState {
    InitialKind kind = InitialKind::basis;
    std::vector<QbitIndex> occupied;
    double x0 = 0.0;
    double sigma = 1.0;
    double k0 = 0.0;
    double x1 = 0.0;
    double k1 = 0.0;
};

struct RunConfig {
    LatticeSpec lattice{1, 8, 0.1, LatticeMode::brick1d};
    KineticParams kinetic;
    double phi = 0.0; ///< s-gate two-particle phase (brick)
    CollisionSpec collision;
    Statistics statistics = Statistics::hard_boson;
    Potentials potentials;
    std::size_t steps = 0;
    InitialState initial;
    std::size_t observe_every = 0; ///< 0: initial and final only
    bool record_density = false;
    double norm_tolerance = kDriftTol;
};

struct TraceRow {
    std::size_t step = 0;
    double time = 0.0; ///< step * eps^2
    double norm = 0.0;
    std::size_t particles = 0;
    double centroid = 0.0; ///< mean position along axis 0
    double width = 0.0;    ///< standard deviation along axis 0
    std::vector<double> density;
};

template <typename State> struct RunResult {
    State state;
    std::vector<TraceRow> trace;
};

SectorState prepare_initial(const RunConfig &config);

/// Runs the brick or lattice-gas engine according to `config.lattice.mode()`
/// on the sector representation.
RunResult<SectorState> run(const RunConfig &config);
RunResult<SectorState> run_brick(const RunConfig &config);
RunResult<SectorState> run_qlga(const RunConfig &config);

/// Same dynamics on the dense representation, for oracle comparisons.
RunResult<DenseState> run_dense(const RunConfig &config);

TraceRow observe(const SectorState &state, const LatticeSpec &lattice, std::size_t step,
                 bool with_density);

// --- gate accounting -------------------------------------------------------------

/// Per-step two-q-bit operation counts under this simulator's decomposition,
/// next to the asymptotic estimates they are compared with.
struct GateCount {
    int d = 1;
    int l = 2;
    std::size_t particles = 1;
    LatticeMode mode = LatticeMode::brick1d;
    std::uint64_t num_qbits = 0;
    /// Brick: s-gates per pass. Lattice gas: exchange gates per step.
    std::uint64_t propagation_exact = 0;
    /// Givens rotations for the single-particle collision block, all sites.
    std::uint64_t collision_exact = 0;
    /// Unordered q-bit pairs touched by a full pair-potential pass.
    std::uint64_t interaction_exact = 0;
    std::uint64_t external_exact = 0;
    double propagation_estimate = 0.0; ///< d l^d
    double collision_estimate = 0.0;   ///< d^2 l^d
    double interaction_estimate = 0.0; ///< d^2 l^(2d)
    double total_estimate = 0.0;       ///< (2d)^2 l^(2d): all ordered q-bit pairs
    double classical_cost = 0.0;       ///< l^(d n)
    double log10_classical_cost = 0.0;
};

GateCount gate_count(const LatticeSpec &lattice, std::size_t particles);

} // namespace qlga
