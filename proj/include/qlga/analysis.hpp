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
 * Oracles and measurements for the brick and lattice-gas engines:
 * two-step transfer matrices, Bloch modes, dispersion fits, an
 * independent Crank-Nicolson integrator, continuum error analysis and
 * the dense-inverse test of the non-local one-step operator.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qlga/dynamics.hpp"
#include "qlga/gates.hpp"
#include "qlga/lattice.hpp"
#include "qlga/state.hpp"

namespace qlga {

class AnalysisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// --- transfer matrix ----------------------------------------------------------------

/// Two-step transfer matrix of the brick rule for the mode
/// (alpha e^{i kappa 2j eps}, beta e^{i kappa (2j+1) eps}), with the even
/// pairing applied first.
struct TransferEigen {
    Eigen::Matrix2cd matrix;
    Eigen::Vector2cd eigenvalues;  ///< direct 2x2 diagonalization
    Eigen::Matrix2cd eigenvectors; ///< columns, unit norm
    int smooth_index = 0;          ///< column with largest overlap with (1, 1)
    cplx smooth_closed_form;       ///< closed-form eigenvalue, branch continuous at kappa = 0
    cplx smooth_direct;
    Eigen::Vector2cd smooth_vector;
    bool degenerate = false;
};

TransferEigen transfer_eigen(cplx a, cplx b, double kappa, double epsilon);

/// Closed-form smooth-branch eigenvalue
/// b^2 + a^2 cos 2x + a cos x sqrt(4 b^2 + 2 a^2 (cos 2x - 1)), x = kappa eps.
cplx smooth_eigenvalue(cplx a, cplx b, double kappa_eps);

/// Angular wave number 2 pi k / (l eps).
double commensurate_kappa(const LatticeSpec &lattice, int k);

/// Exact smooth-branch Bloch eigenvector of the simulated brick double
/// step (M2 then M1) with wave number index k, and its eigenvalue.
struct BlochMode {
    SectorState state;
    cplx eigenvalue;
};

BlochMode brick_bloch_mode(const LatticeSpec &lattice, const KineticParams &params, int k);

/// Single-particle step operator of the lattice gas in momentum space,
/// C diag(exp(-i kappa v_c eps)), for a wave vector along axis 0.
Eigen::MatrixXcd qlga_bloch_matrix(const Eigen::MatrixXcd &collision, const LatticeSpec &lattice,
                                   double kappa);
BlochMode qlga_bloch_mode(const LatticeSpec &lattice, const CollisionSpec &spec, int k);

// --- phase rescaling and dispersion ----------------------------------------------------

struct Snapshot {
    std::size_t step = 0; ///< number of M-passes taken
    std::vector<cplx> amplitudes;
};

/// Multiplies each snapshot by (a + b)^{-step}.
std::vector<Snapshot> rescale_phase(const std::vector<Snapshot> &trajectory, cplx a, cplx b);

struct DispersionRow {
    int k = 0;
    double kappa = 0.0;
    double omega_measured = 0.0;
    double omega_model = 0.0; ///< kappa^2 / (2 m_target)
    double residual = 0.0;    ///< omega_measured - c kappa^2
};

struct DispersionResult {
    std::vector<DispersionRow> rows;
    double coefficient = 0.0; ///< least-squares c in omega = c kappa^2
    double mass = 0.0;        ///< 1 / (2c)
    double target_mass = 0.0;
    double rel_error = 0.0;
    double fit_residual = 0.0; ///< RMS residual
    /// Largest deviation of an evolved mode from eigenvalue * previous state.
    double eigen_defect = 0.0;
};

/// Evolves exact Bloch modes of the brick rule for `double_steps` double
/// steps and fits omega = c kappa^2 with time eps^2 per pass.
DispersionResult measure_dispersion(const KineticParams &params, const LatticeSpec &lattice,
                                    const std::vector<int> &k_list, std::size_t double_steps = 1);

/// Lattice-gas dispersion along axis 0, time eps^2 per step, phase measured
/// relative to mu. target_mass comes from the mu/nu mass relation.
DispersionResult measure_dispersion(const CollisionSpec &spec, const LatticeSpec &lattice,
                                    const std::vector<int> &k_list, std::size_t steps = 1);

/// Least-squares slope through the origin of omega against kappa^2.
double fit_quadratic(std::span<const double> kappa, std::span<const double> omega);

// --- mass relations ---------------------------------------------------------------------

struct MassReport {
    cplx inverse_term;   ///< i / (2m) = (1/d)(nu / (mu - nu) + 1/2)
    double mass = 0.0;   ///< real part; +inf when i/(2m) = 0
    double mass_imag = 0.0;
    bool infinite = false;
    bool real = false; ///< |Im m| <= 1e-10 (1 + |m|)
};

MassReport mass_consistency(cplx mu, cplx nu, int d);

/// m = b i / a.
cplx brick_mass(cplx a, cplx b);

// --- continuum oracle ---------------------------------------------------------------------

struct FineGrid {
    double length = 1.0;    ///< periodic domain [0, length)
    std::size_t points = 256;
    double dt = 1e-3;
};

struct PdeResult {
    std::vector<double> x;
    std::vector<cplx> psi; ///< normalized so sum |psi|^2 h = 1
    double norm_drift = 0.0;
    /// Richardson estimate of the discretization error (L2), from a rerun
    /// on a grid with twice the spacing and time step.
    double error_estimate = 0.0;
};

/**
 * Crank-Nicolson integration of i psi_t = -(1/2m) psi_xx + U(x) psi on a
 * periodic grid with a second-order Laplacian. Unitary up to solver
 * round-off.
 */
PdeResult oracle_pde(const std::function<cplx(double)> &psi0,
                     const std::function<double(double)> &potential, double mass, double time,
                     const FineGrid &grid, bool estimate_error = true);

/// Two distinguishable-coordinate particles on the same periodic grid with
/// pair potential W(x, y); psi0 and the result are points x points, row = x1.
PdeResult oracle_pde_pair(const std::function<cplx(double, double)> &psi0,
                          const std::function<double(double)> &potential,
                          const std::function<double(double, double)> &pair, double mass,
                          double time, const FineGrid &grid);

/// min over alpha of || psi - e^{i alpha} ref || after normalizing both to
/// unit l2 norm.
double aligned_l2_error(std::span<const cplx> psi, std::span<const cplx> reference);

/// Slope of log(error) against log(epsilon).
double convergence_order(std::span<const double> epsilon, std::span<const double> error);

struct ConvergenceSetup {
    KineticParams params;
    double length = 16.0;
    int base_sites = 64;
    int levels = 3;
    double time = 2.0;
    double x0 = 8.0;
    double sigma = 1.5;
    double k0 = 1.0;
    std::function<double(double)> potential; ///< empty: free particle
    int fine_factor = 4;
    double oracle_dt = 5e-4;
};

struct ConvergenceRow {
    double epsilon = 0.0;
    int sites = 0;
    std::size_t passes = 0;
    double error = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double order = 0.0;
    double oracle_error = 0.0;
    double oracle_norm_drift = 0.0;
    /// Oracle error at most 10% of the smallest lattice error.
    bool oracle_resolved = false;
};

ConvergenceResult convergence_study(const ConvergenceSetup &setup);

// --- representation checks ------------------------------------------------------------------

/// Max amplitude deviation between sector and dense runs of `config`.
double dense_vs_sector_check(const RunConfig &config);

/// First-quantized psi(x1, x2) of a two-particle dense state; psi(x2, x1)
/// carries the exchange sign of the statistics.
Eigen::MatrixXcd first_quantized_pair(const DenseState &state);

/// max |psi(x1, x2) + psi(x2, x1)|.
double antisymmetry_defect(const Eigen::MatrixXcd &psi);

/// Single-particle unitary of an arbitrary number-conserving step, obtained
/// by evolving every one-particle basis state.
Eigen::MatrixXcd single_particle_unitary(std::size_t num_qbits,
                                         const std::function<void(SectorState &)> &step);

// --- non-local operator -------------------------------------------------------------------

struct MInverseReport {
    int sites = 0;
    double density = 0.0;        ///< fraction of |M^{-1}_ij| > threshold
    std::size_t nonzero = 0;
    double threshold = 1e-10;
    bool unitary = false;
    double unitarity_defect = 0.0; ///< max |M^dagger M - I|
    double crosscheck = 0.0;       ///< max |LU inverse - circulant inverse|
    double min_magnitude = 0.0;
    double max_magnitude = 0.0;
    /// Counts of log10 |M^{-1}_ij| in unit bins [floor, floor + 1),
    /// from bin_floor upward; entries below 1e-30 land in the first bin.
    int bin_floor = -30;
    std::vector<std::size_t> histogram;
};

/// Builds the circulant one-step operator with b on the diagonal and a on
/// the nearest-neighbour band and corners, and measures how dense its
/// inverse is.
MInverseReport nonlocal_m_density(cplx a, cplx b, int l, double threshold = 1e-10);

} // namespace qlga
