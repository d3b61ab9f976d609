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
#include "qlga/analysis.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace qlga {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

// --- transfer matrix ----------------------------------------------------------------

cplx smooth_eigenvalue(cplx a, cplx b, double x) {
    const double c2 = std::cos(2.0 * x);
    cplx root = std::sqrt(4.0 * b * b + 2.0 * a * a * (c2 - 1.0));
    // Continuous continuation from 2b at x = 0.
    if ((root * std::conj(b)).real() < 0.0) {
        root = -root;
    }
    return b * b + a * a * c2 + a * std::cos(x) * root;
}

TransferEigen transfer_eigen(cplx a, cplx b, double kappa, double epsilon) {
    const KineticCheck check = validate_kinetic(a, b);
    if (!check.ok) {
        throw AnalysisError("invalid kinetic parameters: " + check.message);
    }
    const double x = kappa * epsilon;
    TransferEigen te;
    const cplx off = a * b * (std::exp(I * x) + std::exp(-I * x));
    te.matrix << b * b + a * a * std::exp(-2.0 * I * x), off, off, b * b + a * a * std::exp(2.0 * I * x);

    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(te.matrix);
    te.eigenvalues = solver.eigenvalues();
    te.eigenvectors = solver.eigenvectors();
    for (int c = 0; c < 2; ++c) {
        te.eigenvectors.col(c).normalize();
    }
    te.smooth_closed_form = smooth_eigenvalue(a, b, x);
    te.degenerate = std::abs(te.eigenvalues(0) - te.eigenvalues(1)) < 1e-9;
    const double o0 = std::abs(te.eigenvectors.col(0).sum());
    const double o1 = std::abs(te.eigenvectors.col(1).sum());
    te.smooth_index = o1 > o0 ? 1 : 0;
    te.smooth_direct = te.eigenvalues(te.smooth_index);
    if (te.degenerate) {
        te.smooth_vector = Eigen::Vector2cd(1.0, 1.0) / std::sqrt(2.0);
    } else {
        te.smooth_vector = te.eigenvectors.col(te.smooth_index);
        const cplx overlap = te.smooth_vector.sum();
        if (std::abs(overlap) > 0.0) {
            te.smooth_vector *= std::conj(overlap) / std::abs(overlap);
        }
    }
    return te;
}

double commensurate_kappa(const LatticeSpec &lattice, int k) {
    return kTwoPi * k / (lattice.side() * lattice.epsilon());
}

BlochMode brick_bloch_mode(const LatticeSpec &lattice, const KineticParams &params, int k) {
    if (lattice.mode() != LatticeMode::brick1d) {
        throw AnalysisError("brick Bloch mode needs a brick1d lattice");
    }
    const double kappa = commensurate_kappa(lattice, k);
    const double eps = lattice.epsilon();
    // The simulated double step applies the odd pairing first, which is the
    // even-first transfer matrix at -kappa.
    const TransferEigen te = transfer_eigen(params.a, params.b, -kappa, eps);
    const std::size_t l = static_cast<std::size_t>(lattice.side());
    SectorState state(l, 1, Statistics::hard_boson);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l / 2));
    for (std::size_t j = 0; j < l; ++j) {
        const cplx coeff = (j % 2 == 0) ? te.smooth_vector(0) : te.smooth_vector(1);
        state.amplitudes()[j] = scale * coeff * std::exp(I * kappa * static_cast<double>(j) * eps);
    }
    return {std::move(state), te.smooth_closed_form};
}

Eigen::MatrixXcd qlga_bloch_matrix(const Eigen::MatrixXcd &collision, const LatticeSpec &lattice,
                                   double kappa) {
    const int channels = lattice.channels_per_site();
    Eigen::VectorXcd shift(channels);
    for (int c = 0; c < channels; ++c) {
        const auto [axis, sign] = lattice.velocity(c);
        const double v = axis == 0 ? sign : 0.0;
        shift(c) = std::exp(-I * kappa * v * lattice.epsilon());
    }
    return collision * shift.asDiagonal();
}

BlochMode qlga_bloch_mode(const LatticeSpec &lattice, const CollisionSpec &spec, int k) {
    if (lattice.mode() != LatticeMode::qlga) {
        throw AnalysisError("lattice-gas Bloch mode needs a qlga lattice");
    }
    const double kappa = commensurate_kappa(lattice, k);
    const Eigen::MatrixXcd t =
        qlga_bloch_matrix(build_collision_matrix(spec, lattice.dimension()), lattice, kappa);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(t);
    const Eigen::Index channels = t.rows();
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index c = 0; c < channels; ++c) {
        const Eigen::VectorXcd v = solver.eigenvectors().col(c).normalized();
        const double overlap = std::abs(v.sum());
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = c;
        }
    }
    Eigen::VectorXcd phi = solver.eigenvectors().col(best).normalized();
    const cplx s = phi.sum();
    phi *= std::conj(s) / std::abs(s);

    SectorState state(lattice.num_qbits(), 1, spec.statistics);
    const double scale = 1.0 / std::sqrt(static_cast<double>(lattice.num_sites()));
    for (std::size_t site = 0; site < lattice.num_sites(); ++site) {
        const cplx wave = std::exp(I * kappa * lattice.position(site, 0));
        for (int c = 0; c < lattice.channels_per_site(); ++c) {
            state.amplitudes()[lattice.qbit(site, c)] = scale * phi(c) * wave;
        }
    }
    return {std::move(state), solver.eigenvalues()(best)};
}

// --- phase rescaling and dispersion ----------------------------------------------------

std::vector<Snapshot> rescale_phase(const std::vector<Snapshot> &trajectory, cplx a, cplx b) {
    const cplx sum = a + b;
    if (std::abs(sum) < 1e-14) {
        throw AnalysisError("cannot rescale: a + b = 0");
    }
    std::vector<Snapshot> out = trajectory;
    for (Snapshot &snap : out) {
        const double t = static_cast<double>(snap.step);
        const cplx factor = std::pow(std::abs(sum), -t) * std::exp(-I * t * std::arg(sum));
        for (cplx &amp : snap.amplitudes) {
            amp *= factor;
        }
    }
    return out;
}

double fit_quadratic(std::span<const double> kappa, std::span<const double> omega) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < kappa.size(); ++k) {
        const double k2 = kappa[k] * kappa[k];
        num += omega[k] * k2;
        den += k2 * k2;
    }
    return den > 0.0 ? num / den : 0.0;
}

namespace {

double max_deviation(std::span<const cplx> cur, std::span<const cplx> prev, cplx factor) {
    double worst = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
        worst = std::max(worst, std::abs(cur[k] - factor * prev[k]));
    }
    return worst;
}

void finish_fit(DispersionResult &result) {
    std::vector<double> kappa;
    std::vector<double> omega;
    for (const auto &row : result.rows) {
        kappa.push_back(row.kappa);
        omega.push_back(row.omega_measured);
    }
    result.coefficient = fit_quadratic(kappa, omega);
    result.mass = result.coefficient != 0.0 ? 1.0 / (2.0 * result.coefficient)
                                            : std::numeric_limits<double>::infinity();
    double sq = 0.0;
    for (auto &row : result.rows) {
        row.omega_model = std::isinf(result.target_mass)
                              ? 0.0
                              : row.kappa * row.kappa / (2.0 * result.target_mass);
        row.residual = row.omega_measured - result.coefficient * row.kappa * row.kappa;
        sq += row.residual * row.residual;
    }
    result.fit_residual = result.rows.empty() ? 0.0 : std::sqrt(sq / result.rows.size());
    result.rel_error = std::abs(result.mass - result.target_mass) / std::abs(result.target_mass);
}

double unwrapped_phase(cplx ratio) {
    const double phase = std::arg(ratio);
    if (std::abs(phase) > std::numbers::pi / 2) {
        throw AnalysisError("phase unwrapping ambiguity: per-step phase " + std::to_string(phase) +
                            " exceeds pi/2; use smaller kappa eps");
    }
    return phase;
}

} // namespace

DispersionResult measure_dispersion(const KineticParams &params, const LatticeSpec &lattice,
                                    const std::vector<int> &k_list, std::size_t double_steps) {
    if (double_steps == 0) {
        throw AnalysisError("dispersion needs at least one double step");
    }
    DispersionResult result;
    const cplx target = brick_mass(params.a, params.b);
    result.target_mass = std::isfinite(target.real()) ? target.real()
                                                      : std::numeric_limits<double>::infinity();
    const BrickStepper stepper(lattice, params);
    const cplx ab2 = (params.a + params.b) * (params.a + params.b);
    const double eps2 = lattice.epsilon() * lattice.epsilon();
    for (int k : k_list) {
        BlochMode mode = brick_bloch_mode(lattice, params, k);
        SectorState state = mode.state;
        double phase = 0.0;
        for (std::size_t s = 0; s < double_steps; ++s) {
            const SectorState prev = state;
            stepper.pass(state, 0);
            stepper.pass(state, 1);
            result.eigen_defect = std::max(
                result.eigen_defect, max_deviation(state.amplitudes(), prev.amplitudes(), mode.eigenvalue));
            phase += unwrapped_phase(inner_product(prev, state) / ab2);
        }
        DispersionRow row;
        row.k = k;
        row.kappa = commensurate_kappa(lattice, k);
        row.omega_measured = -phase / static_cast<double>(double_steps) / (2.0 * eps2);
        result.rows.push_back(row);
    }
    finish_fit(result);
    return result;
}

DispersionResult measure_dispersion(const CollisionSpec &spec, const LatticeSpec &lattice,
                                    const std::vector<int> &k_list, std::size_t steps) {
    if (steps == 0) {
        throw AnalysisError("dispersion needs at least one step");
    }
    DispersionResult result;
    const MassReport mass = mass_consistency(spec.mu, spec.nu, lattice.dimension());
    result.target_mass = mass.infinite ? std::numeric_limits<double>::infinity() : mass.mass;
    const QlgaStepper stepper(lattice, spec);
    const double eps2 = lattice.epsilon() * lattice.epsilon();
    for (int k : k_list) {
        BlochMode mode = qlga_bloch_mode(lattice, spec, k);
        SectorState state = std::move(mode.state);
        double phase = 0.0;
        for (std::size_t s = 0; s < steps; ++s) {
            const SectorState prev = state;
            stepper.step(state);
            result.eigen_defect = std::max(
                result.eigen_defect, max_deviation(state.amplitudes(), prev.amplitudes(), mode.eigenvalue));
            phase += unwrapped_phase(inner_product(prev, state) / spec.mu);
        }
        DispersionRow row;
        row.k = k;
        row.kappa = commensurate_kappa(lattice, k);
        row.omega_measured = -phase / static_cast<double>(steps) / eps2;
        result.rows.push_back(row);
    }
    finish_fit(result);
    return result;
}

// --- mass relations ---------------------------------------------------------------------

MassReport mass_consistency(cplx mu, cplx nu, int d) {
    if (d < 1) {
        throw AnalysisError("dimension must be >= 1");
    }
    if (std::abs(mu - nu) < 1e-15) {
        throw AnalysisError("mass relation undefined for mu = nu");
    }
    MassReport report;
    report.inverse_term = (nu / (mu - nu) + 0.5) / static_cast<double>(d);
    if (std::abs(report.inverse_term) < 1e-14) {
        report.infinite = true;
        report.mass = std::numeric_limits<double>::infinity();
        report.real = true;
        return report;
    }
    const cplx m = I / (2.0 * report.inverse_term);
    report.mass = m.real();
    report.mass_imag = m.imag();
    report.real = std::abs(m.imag()) <= 1e-10 * (1.0 + std::abs(m));
    return report;
}

cplx brick_mass(cplx a, cplx b) {
    if (a == cplx{0.0, 0.0}) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    return b * I / a;
}

// --- continuum oracle ---------------------------------------------------------------------

namespace {

using SparseC = Eigen::SparseMatrix<cplx>;

struct CnPropagator {
    Eigen::SparseLU<SparseC> lhs;
    SparseC rhs;
};

void build_cn(CnPropagator &cn, const SparseC &hamiltonian, double dt) {
    SparseC id(hamiltonian.rows(), hamiltonian.cols());
    id.setIdentity();
    const SparseC a = id + (I * (dt / 2.0)) * hamiltonian;
    cn.rhs = id - (I * (dt / 2.0)) * hamiltonian;
    cn.lhs.analyzePattern(a);
    cn.lhs.factorize(a);
    if (cn.lhs.info() != Eigen::Success) {
        throw AnalysisError("Crank-Nicolson factorization failed");
    }
}

Eigen::VectorXcd cn_evolve(const CnPropagator &cn, Eigen::VectorXcd psi, std::size_t steps) {
    for (std::size_t s = 0; s < steps; ++s) {
        const Eigen::VectorXcd b = cn.rhs * psi;
        psi = cn.lhs.solve(b);
        if (cn.lhs.info() != Eigen::Success) {
            throw AnalysisError("Crank-Nicolson solve failed");
        }
    }
    return psi;
}

std::vector<Eigen::Triplet<cplx>> laplacian_triplets(std::size_t n, double coeff,
                                                     std::size_t stride, std::size_t offset,
                                                     std::size_t outer) {
    // coeff * (psi_{j+1} - 2 psi_j + psi_{j-1}) along one axis of a grid.
    std::vector<Eigen::Triplet<cplx>> t;
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto row = static_cast<int>(o * offset + j * stride);
            const auto next = static_cast<int>(o * offset + ((j + 1) % n) * stride);
            const auto prev = static_cast<int>(o * offset + ((j + n - 1) % n) * stride);
            t.emplace_back(row, row, -2.0 * coeff);
            t.emplace_back(row, next, coeff);
            t.emplace_back(row, prev, coeff);
        }
    }
    return t;
}

std::size_t step_count(double time, double dt) {
    if (!(dt > 0.0) || time < 0.0) {
        throw AnalysisError("oracle needs positive dt and non-negative time");
    }
    return static_cast<std::size_t>(std::ceil(time / dt - 1e-9));
}

PdeResult solve_single(const std::function<cplx(double)> &psi0,
                       const std::function<double(double)> &potential, double mass, double time,
                       const FineGrid &grid) {
    const std::size_t n = grid.points;
    if (n < 4) {
        throw AnalysisError("oracle grid needs at least 4 points");
    }
    const double h = grid.length / static_cast<double>(n);
    const std::size_t steps = step_count(time, grid.dt);
    const double dt = steps > 0 ? time / static_cast<double>(steps) : 0.0;

    PdeResult result;
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(n));
    result.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        result.x[j] = h * static_cast<double>(j);
        psi(static_cast<Eigen::Index>(j)) = psi0(result.x[j]);
    }
    psi /= std::sqrt(psi.squaredNorm() * h);

    if (steps > 0) {
        auto triplets = laplacian_triplets(n, -1.0 / (2.0 * mass * h * h), 1, 0, 1);
        if (potential) {
            for (std::size_t j = 0; j < n; ++j) {
                triplets.emplace_back(static_cast<int>(j), static_cast<int>(j), potential(result.x[j]));
            }
        }
        SparseC hamiltonian(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        hamiltonian.setFromTriplets(triplets.begin(), triplets.end());
        CnPropagator cn;
        build_cn(cn, hamiltonian, dt);
        psi = cn_evolve(cn, psi, steps);
    }
    result.norm_drift = std::abs(std::sqrt(psi.squaredNorm() * h) - 1.0);
    result.psi.assign(psi.data(), psi.data() + psi.size());
    return result;
}

} // namespace

PdeResult oracle_pde(const std::function<cplx(double)> &psi0,
                     const std::function<double(double)> &potential, double mass, double time,
                     const FineGrid &grid, bool estimate_error) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw AnalysisError("oracle needs a positive finite mass");
    }
    PdeResult fine = solve_single(psi0, potential, mass, time, grid);
    if (estimate_error) {
        if (grid.points % 2 != 0) {
            throw AnalysisError("error estimate needs an even number of grid points");
        }
        FineGrid coarse = grid;
        coarse.points = grid.points / 2;
        coarse.dt = grid.dt * 2.0;
        const PdeResult rough = solve_single(psi0, potential, mass, time, coarse);
        const double h2 = grid.length / static_cast<double>(coarse.points);
        double sq = 0.0;
        for (std::size_t j = 0; j < coarse.points; ++j) {
            sq += std::norm(fine.psi[2 * j] - rough.psi[j]) * h2;
        }
        // Second order in both h and dt.
        fine.error_estimate = std::sqrt(sq) / 3.0;
    }
    return fine;
}

PdeResult oracle_pde_pair(const std::function<cplx(double, double)> &psi0,
                          const std::function<double(double)> &potential,
                          const std::function<double(double, double)> &pair, double mass,
                          double time, const FineGrid &grid) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw AnalysisError("oracle needs a positive finite mass");
    }
    const std::size_t n = grid.points;
    if (n < 4) {
        throw AnalysisError("oracle grid needs at least 4 points");
    }
    const double h = grid.length / static_cast<double>(n);
    const std::size_t steps = step_count(time, grid.dt);
    const double dt = steps > 0 ? time / static_cast<double>(steps) : 0.0;
    const std::size_t total = n * n;

    PdeResult result;
    result.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        result.x[j] = h * static_cast<double>(j);
    }
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(total));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            psi(static_cast<Eigen::Index>(r * n + c)) = psi0(result.x[r], result.x[c]);
        }
    }
    psi /= std::sqrt(psi.squaredNorm() * h * h);

    if (steps > 0) {
        const double coeff = -1.0 / (2.0 * mass * h * h);
        auto triplets = laplacian_triplets(n, coeff, n, 1, n); // x1 (row index)
        auto second = laplacian_triplets(n, coeff, 1, n, n);   // x2 (column index)
        triplets.insert(triplets.end(), second.begin(), second.end());
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                double v = 0.0;
                if (potential) {
                    v += potential(result.x[r]) + potential(result.x[c]);
                }
                if (pair) {
                    v += pair(result.x[r], result.x[c]);
                }
                if (v != 0.0) {
                    const auto idx = static_cast<int>(r * n + c);
                    triplets.emplace_back(idx, idx, v);
                }
            }
        }
        SparseC hamiltonian(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
        hamiltonian.setFromTriplets(triplets.begin(), triplets.end());
        CnPropagator cn;
        build_cn(cn, hamiltonian, dt);
        psi = cn_evolve(cn, psi, steps);
    }
    result.norm_drift = std::abs(std::sqrt(psi.squaredNorm() * h * h) - 1.0);
    result.psi.assign(psi.data(), psi.data() + psi.size());
    return result;
}

double aligned_l2_error(std::span<const cplx> psi, std::span<const cplx> reference) {
    if (psi.size() != reference.size()) {
        throw AnalysisError("cannot compare states of different sizes");
    }
    double np = 0.0;
    double nr = 0.0;
    cplx overlap{0.0, 0.0};
    for (std::size_t k = 0; k < psi.size(); ++k) {
        np += std::norm(psi[k]);
        nr += std::norm(reference[k]);
        overlap += std::conj(reference[k]) * psi[k];
    }
    if (np == 0.0 || nr == 0.0) {
        throw AnalysisError("cannot compare a zero state");
    }
    // || psi/|psi| - e^{i alpha} ref/|ref| ||^2 minimized at alpha = arg <ref, psi>.
    const double cosine = std::min(1.0, std::abs(overlap) / std::sqrt(np * nr));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * cosine));
}

double convergence_order(std::span<const double> epsilon, std::span<const double> error) {
    if (epsilon.size() != error.size() || epsilon.size() < 2) {
        throw AnalysisError("convergence order needs at least two levels");
    }
    const auto n = static_cast<double>(epsilon.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < epsilon.size(); ++k) {
        const double x = std::log(epsilon[k]);
        const double y = std::log(error[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence_study(const ConvergenceSetup &setup) {
    if (setup.levels < 2) {
        throw AnalysisError("convergence study needs at least two levels");
    }
    const cplx m = brick_mass(setup.params.a, setup.params.b);
    if (!(m.real() > 0.0) || !std::isfinite(m.real())) {
        throw AnalysisError("convergence study needs a finite positive mass");
    }
    const int finest_sites = setup.base_sites << (setup.levels - 1);
    const double period = setup.length;
    const auto psi0 = [&](double x) {
        double dx = std::fmod(x - setup.x0, period);
        if (dx < -period / 2) {
            dx += period;
        } else if (dx >= period / 2) {
            dx -= period;
        }
        return std::exp(-dx * dx / (4.0 * setup.sigma * setup.sigma)) *
               std::exp(I * setup.k0 * (setup.x0 + dx));
    };
    FineGrid grid{setup.length, static_cast<std::size_t>(finest_sites * setup.fine_factor),
                  setup.oracle_dt};
    const PdeResult oracle = oracle_pde(psi0, setup.potential, m.real(), setup.time, grid, true);

    ConvergenceResult result;
    result.oracle_error = oracle.error_estimate;
    result.oracle_norm_drift = oracle.norm_drift;
    for (int level = 0; level < setup.levels; ++level) {
        const int sites = setup.base_sites << level;
        const double eps = setup.length / sites;
        const double passes_real = setup.time / (eps * eps);
        const auto passes = static_cast<std::size_t>(std::llround(passes_real));
        if (std::abs(passes_real - static_cast<double>(passes)) > 1e-9 * passes_real ||
            passes % 2 != 0) {
            throw AnalysisError("time must be an even number of passes at every level");
        }
        RunConfig config;
        config.lattice = LatticeSpec(1, sites, eps, LatticeMode::brick1d);
        config.kinetic = setup.params;
        config.steps = passes;
        config.initial.kind = InitialKind::gaussian;
        config.initial.x0 = setup.x0;
        config.initial.sigma = setup.sigma;
        config.initial.k0 = setup.k0;
        if (setup.potential) {
            PotentialField field;
            for (int j = 0; j < sites; ++j) {
                field.values.push_back(setup.potential(j * eps));
            }
            config.potentials.external = std::move(field);
        }
        const auto out = run(config);

        const std::size_t stride = static_cast<std::size_t>(finest_sites * setup.fine_factor / sites);
        std::vector<cplx> ref(static_cast<std::size_t>(sites));
        for (int j = 0; j < sites; ++j) {
            ref[static_cast<std::size_t>(j)] = oracle.psi[static_cast<std::size_t>(j) * stride];
        }
        ConvergenceRow row;
        row.epsilon = eps;
        row.sites = sites;
        row.passes = passes;
        row.error = aligned_l2_error(out.state.amplitudes(), ref);
        result.rows.push_back(row);
    }
    std::vector<double> eps;
    std::vector<double> err;
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto &row : result.rows) {
        eps.push_back(row.epsilon);
        err.push_back(row.error);
        smallest = std::min(smallest, row.error);
    }
    result.order = convergence_order(eps, err);
    result.oracle_resolved = result.oracle_error <= 0.1 * smallest;
    return result;
}

// --- representation checks ------------------------------------------------------------------

double dense_vs_sector_check(const RunConfig &config) {
    const auto sector = run(config);
    const auto dense = run_dense(config);
    const DenseState mapped = sector_to_dense(sector.state);
    const auto a = mapped.amplitudes();
    const auto b = dense.state.amplitudes();
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return worst;
}

Eigen::MatrixXcd first_quantized_pair(const DenseState &state) {
    const auto n = static_cast<Eigen::Index>(state.num_qbits());
    const double sign = state.statistics() == Statistics::fermion ? -1.0 : 1.0;
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n, n);
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (std::popcount(static_cast<std::uint64_t>(idx)) != 2) {
            continue;
        }
        const int p = std::countr_zero(static_cast<std::uint64_t>(idx));
        const int q = 63 - std::countl_zero(static_cast<std::uint64_t>(idx));
        psi(p, q) = amps[idx];
        psi(q, p) = sign * amps[idx];
    }
    return psi;
}

double antisymmetry_defect(const Eigen::MatrixXcd &psi) {
    return (psi + psi.transpose()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd single_particle_unitary(std::size_t num_qbits,
                                         const std::function<void(SectorState &)> &step) {
    const auto n = static_cast<Eigen::Index>(num_qbits);
    Eigen::MatrixXcd u(n, n);
    for (QbitIndex q = 0; q < num_qbits; ++q) {
        const std::array<QbitIndex, 1> occ{q};
        SectorState state = make_sector_basis(num_qbits, occ);
        step(state);
        for (Eigen::Index r = 0; r < n; ++r) {
            u(r, q) = state.amplitudes()[static_cast<std::size_t>(r)];
        }
    }
    return u;
}

// --- non-local operator -------------------------------------------------------------------

MInverseReport nonlocal_m_density(cplx a, cplx b, int l, double threshold) {
    if (l < 3 || l > 512) {
        throw AnalysisError("non-local operator analysis supports 3 <= l <= 512");
    }
    MInverseReport report;
    report.sites = l;
    report.threshold = threshold;
    const auto n = static_cast<Eigen::Index>(l);

    std::vector<cplx> eig(static_cast<std::size_t>(l));
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < l; ++k) {
        eig[static_cast<std::size_t>(k)] = b + 2.0 * a * std::cos(kTwoPi * k / l);
        smallest = std::min(smallest, std::abs(eig[static_cast<std::size_t>(k)]));
    }
    if (smallest < 1e-12) {
        throw AnalysisError("operator is singular for these parameters");
    }

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = b;
        m(i, (i + 1) % n) = a;
        m(i, (i + n - 1) % n) = a;
    }
    report.unitarity_defect =
        (m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    report.unitary = report.unitarity_defect < 1e-12;

    const Eigen::MatrixXcd inv = m.partialPivLu().inverse();

    // Circulant route: M^{-1}_{ij} = g_{(j - i) mod l}, g_j = (1/l) sum_k w^{kj} / e_k.
    std::vector<cplx> g(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < l; ++k) {
            acc += std::exp(I * (kTwoPi * static_cast<double>((static_cast<long>(k) * j) % l) / l)) /
                   eig[static_cast<std::size_t>(k)];
        }
        g[static_cast<std::size_t>(j)] = acc / static_cast<double>(l);
    }

    report.min_magnitude = std::numeric_limits<double>::infinity();
    int top_bin = report.bin_floor;
    std::vector<double> magnitudes;
    magnitudes.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double mag = std::abs(inv(i, j));
            report.crosscheck = std::max(
                report.crosscheck, std::abs(inv(i, j) - g[static_cast<std::size_t>((j - i + n) % n)]));
            report.min_magnitude = std::min(report.min_magnitude, mag);
            report.max_magnitude = std::max(report.max_magnitude, mag);
            if (mag > threshold) {
                ++report.nonzero;
            }
            magnitudes.push_back(mag);
            if (mag > 0.0) {
                top_bin = std::max(top_bin, static_cast<int>(std::floor(std::log10(mag))));
            }
        }
    }
    report.density = static_cast<double>(report.nonzero) / static_cast<double>(n * n);
    report.histogram.assign(static_cast<std::size_t>(top_bin - report.bin_floor + 1), 0);
    for (double mag : magnitudes) {
        int bin = mag > 0.0 ? static_cast<int>(std::floor(std::log10(mag))) : report.bin_floor;
        bin = std::max(bin, report.bin_floor);
        ++report.histogram[static_cast<std::size_t>(bin - report.bin_floor)];
    }
    return report;
}

} // namespace qlga
