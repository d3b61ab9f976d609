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
// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qlga/analysis.hpp"
#include "qlga/dynamics.hpp"

using namespace qlga;
using oracle::MatrixXcd;

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

KineticParams theta_params(double theta) { return {cplx{0.0, std::sin(theta)}, std::cos(theta)}; }

PotentialField random_smooth_field(const LatticeSpec &lat, std::mt19937_64 &rng, double strength) {
    PotentialField f;
    const double period = lat.side() * lat.epsilon();
    std::vector<double> amp, phase;
    for (int m = 0; m < 3 * lat.dimension(); ++m) {
        amp.push_back(oracle::uniform(rng, -1.0, 1.0));
        phase.push_back(oracle::uniform(rng, 0.0, 2.0 * kPi));
    }
    for (std::size_t s = 0; s < lat.num_sites(); ++s) {
        double u = 0.0;
        for (int axis = 0; axis < lat.dimension(); ++axis) {
            for (int m = 1; m <= 3; ++m) {
                const auto k = static_cast<std::size_t>(axis * 3 + m - 1);
                u += amp[k] / m * std::cos(2.0 * kPi * m * lat.position(s, axis) / period + phase[k]);
            }
        }
        f.values.push_back(strength * u);
    }
    return f;
}

PairPotential smooth_pair(const LatticeSpec &lat, double strength, double range) {
    const std::size_t n = lat.num_sites();
    const double period = lat.side() * lat.epsilon();
    std::vector<double> t(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            double r2 = 0.0;
            for (int axis = 0; axis < lat.dimension(); ++axis) {
                double dx = std::fabs(lat.position(x, axis) - lat.position(y, axis));
                dx = std::min(dx, period - dx);
                r2 += dx * dx;
            }
            t[x * n + y] = strength * std::exp(-r2 / (2.0 * range * range));
        }
    }
    return PairPotential(n, t);
}

// 1. Exact circuit identity for Bloch eigenvectors.
Outcome exact_circuit_identity() {
    std::mt19937_64 rng(1001);
    const LatticeSpec lat(1, 64, 1.0 / 64, LatticeMode::brick1d);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto [a, b] = oracle::random_kinetic(rng);
        const KineticParams p{a, b};
        const BrickStepper stepper(lat, p);
        for (int k = 0; k < 64; ++k) {
            const BlochMode mode = brick_bloch_mode(lat, p, k);
            const cplx lam = smooth_eigenvalue(a, b, commensurate_kappa(lat, k) * lat.epsilon());
            SectorState s = mode.state;
            stepper.pass(s, 0);
            stepper.pass(s, 1);
            for (std::size_t j = 0; j < s.size(); ++j) {
                worst = std::max(worst, std::abs(s.amplitudes()[j] - lam * mode.state.amplitudes()[j]));
            }
        }
    }
    return {worst < 1e-12, "max |U psi - lambda psi| = " + fmt(worst) + " over 100 x 64 modes"};
}

// 2. Brick dispersion reproduces m = cot(theta).
Outcome brick_mass_fit() {
    const LatticeSpec lat(1, 256, 1.0 / 256, LatticeMode::brick1d);
    // kappa eps = 2 pi k / 256 <= 0.05 for k <= 2.
    bool pass = true;
    std::string detail;
    for (double theta : {kPi / 6, kPi / 4, kPi / 3}) {
        const DispersionResult r = measure_dispersion(theta_params(theta), lat, {1, 2}, 4);
        const double target = 1.0 / std::tan(theta);
        const double rel = std::abs(r.mass - target) / target;
        pass = pass && rel < 0.01;
        detail += "m=" + fmt(r.mass) + " vs " + fmt(target) + " (" + fmt(100 * rel) + "%) ";
    }
    return {pass, detail};
}

// 3. Mass formula reduction and lattice-gas mass.
Outcome mass_formula() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto [a, b] = oracle::random_kinetic(rng);
        const MassReport m = mass_consistency(a + b, a - b, 1);
        const cplx expect = brick_mass(a, b);
        worst = std::max(worst, std::abs(cplx{m.mass, m.mass_imag} - expect) / (1.0 + std::abs(expect)));
    }
    const MassReport three = mass_consistency(1.0, I, 3);
    const double analytic = std::abs(three.mass - 3.0);

    const LatticeSpec lat(3, 64, 1.0 / 64, LatticeMode::qlga);
    const CollisionSpec spec{1.0, I, std::exp(0.7 * I)};
    const DispersionResult r = measure_dispersion(spec, lat, {1}, 1);
    const bool pass = worst < 1e-12 && analytic < 1e-12 && r.rel_error < 0.02;
    return {pass, "d=1 reduction max rel dev " + fmt(worst) + "; d=3 analytic |m-3| = " + fmt(analytic) +
                      "; measured m = " + fmt(r.mass) + " (" + fmt(100 * r.rel_error) + "%)"};
}

// 4. First-order continuum convergence.
Outcome continuum_convergence() {
    bool pass = true;
    std::string detail;
    for (double depth : {0.0, 0.5}) {
        ConvergenceSetup setup;
        setup.params = theta_params(kPi / 4);
        if (depth != 0.0) {
            setup.potential = [depth, &setup](double x) {
                return depth * (1.0 - std::cos(2.0 * kPi * (x - setup.length / 2) / setup.length));
            };
        }
        const ConvergenceResult r = convergence_study(setup);
        const bool ok = std::abs(r.order - 1.0) <= 0.3 && r.oracle_resolved && r.oracle_norm_drift < 1e-10;
        pass = pass && ok;
        detail += std::string(depth == 0.0 ? "free" : "well") + ": errors";
        for (const auto &row : r.rows) {
            detail += " " + fmt(row.error);
        }
        detail += " order " + fmt(r.order) + " oracle err " + fmt(r.oracle_error) + "; ";
    }
    return {pass, detail};
}

// 5. Dense and sector representations agree.
Outcome oracle_equivalence() {
    RunConfig one;
    one.lattice = LatticeSpec(1, 8, 0.25, LatticeMode::brick1d);
    one.kinetic = theta_params(0.8);
    one.initial.kind = InitialKind::gaussian;
    one.initial.x0 = 1.0;
    one.initial.sigma = 0.5;
    one.initial.k0 = 2.0;
    one.steps = 100;
    const double d1 = dense_vs_sector_check(one);

    RunConfig two;
    two.lattice = LatticeSpec(1, 6, 0.5, LatticeMode::brick1d);
    two.kinetic = theta_params(0.5);
    two.phi = 0.3;
    two.statistics = Statistics::fermion;
    two.initial.occupied = {0, 3};
    two.potentials.pair = smooth_pair(two.lattice, 2.0, 0.75);
    two.steps = 60;
    const double d2 = dense_vs_sector_check(two);

    RunConfig gas;
    gas.lattice = LatticeSpec(2, 2, 0.5, LatticeMode::qlga);
    gas.collision = CollisionSpec{std::exp(0.2 * I), I, std::exp(0.7 * I)};
    gas.initial.occupied = {5};
    gas.steps = 20;
    const double d3 = dense_vs_sector_check(gas);
    return {d1 < 1e-12 && d2 < 1e-12 && d3 < 1e-12,
            "deviations " + fmt(d1) + ", " + fmt(d2) + ", " + fmt(d3)};
}

// 6. Exchange statistics.
Outcome statistics_checks() {
    // Interacting two-fermion brick run against a first-quantized propagation
    // that never imposes antisymmetry.
    const int l = 10;
    const LatticeSpec lat(1, l, 0.4, LatticeMode::brick1d);
    const KineticParams p = theta_params(0.7);
    const double phi = 0.9;
    const double phi_free = -std::arg(p.b * p.b - p.a * p.a);
    std::mt19937_64 rng(66);
    Potentials pots;
    pots.external = random_smooth_field(lat, rng, 1.0);
    pots.pair = smooth_pair(lat, 1.5, 1.0);
    const BrickStepper stepper(lat, p, phi, pots);
    RunConfig cfg;
    cfg.lattice = lat;
    cfg.statistics = Statistics::fermion;
    cfg.initial.kind = InitialKind::gaussian_pair;
    cfg.initial.x0 = 0.8;
    cfg.initial.x1 = 2.4;
    cfg.initial.k0 = 1.5;
    cfg.initial.sigma = 0.6;
    DenseState dense = sector_to_dense(prepare_initial(cfg));
    MatrixXcd psi = first_quantized_pair(dense);
    const double eps2 = lat.epsilon() * lat.epsilon();
    double antisym = 0.0;
    double deviation = 0.0;
    for (std::size_t t = 0; t < 40; ++t) {
        stepper.pass(dense, t);
        const bool even = t % 2 == 1;
        MatrixXcd m = MatrixXcd::Zero(l, l);
        MatrixXcd pair_phase = MatrixXcd::Ones(l, l);
        for (int j = 0; j < l / 2; ++j) {
            const int a = even ? 2 * j : 2 * j + 1;
            const int b = even ? 2 * j + 1 : (2 * j + 2) % l;
            m(a, a) = m(b, b) = p.b;
            m(a, b) = m(b, a) = p.a;
            pair_phase(a, b) = pair_phase(b, a) = std::exp(-I * (phi - phi_free));
        }
        psi = m * psi * m.transpose();
        for (int x = 0; x < l; ++x) {
            for (int y = 0; y < l; ++y) {
                const double u = pots.external->values[static_cast<std::size_t>(x)] +
                                 pots.external->values[static_cast<std::size_t>(y)] +
                                 (x != y ? (*pots.pair)(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) : 0.0);
                psi(x, y) *= pair_phase(x, y) * std::exp(-I * eps2 * u);
            }
        }
        antisym = std::max(antisym, antisymmetry_defect(psi));
        deviation = std::max(deviation, (first_quantized_pair(dense) - psi).cwiseAbs().maxCoeff());
    }

    // Hard bosons and fermions with disjoint supports.
    RunConfig far;
    far.lattice = LatticeSpec(1, 32, 0.25, LatticeMode::brick1d);
    far.kinetic = theta_params(0.6);
    far.phi = 0.4;
    far.potentials.external = random_smooth_field(far.lattice, rng, 1.0);
    far.initial.occupied = {3, 19};
    const BrickStepper far_stepper(far.lattice, far.kinetic, far.phi, far.potentials);
    far.statistics = Statistics::hard_boson;
    SectorState bosons = prepare_initial(far);
    far.statistics = Statistics::fermion;
    SectorState fermions = prepare_initial(far);
    double density_gap = 0.0;
    for (std::size_t t = 0; t < 6; ++t) {
        far_stepper.pass(bosons, t);
        far_stepper.pass(fermions, t);
        for (std::size_t r = 0; r < bosons.size(); ++r) {
            density_gap = std::max(density_gap, std::abs(std::norm(bosons.amplitudes()[r]) -
                                                         std::norm(fermions.amplitudes()[r])));
        }
    }
    return {antisym < 1e-12 && deviation < 1e-12 && density_gap < 1e-12,
            "antisymmetry defect " + fmt(antisym) + ", dense vs first-quantized " + fmt(deviation) +
                ", boson/fermion |amp|^2 gap " + fmt(density_gap)};
}

// 7. Conservation over 10^4 steps.
Outcome conservation() {
    std::mt19937_64 rng(707);
    const std::size_t steps = 10000;
    double drift = 0.0;
    double leak = 0.0;

    const auto run_sector = [&](RunConfig cfg) {
        cfg.steps = steps;
        cfg.observe_every = 1;
        cfg.norm_tolerance = 1e-10;
        const auto out = run(cfg);
        for (const auto &row : out.trace) {
            drift = std::max(drift, std::abs(row.norm - 1.0));
            if (row.particles != out.state.particles()) {
                leak = 1.0;
            }
        }
    };
    const auto run_dense_exact = [&](const RunConfig &cfg, auto &&step) {
        DenseState s = sector_to_dense(prepare_initial(cfg));
        const std::size_t n = cfg.initial.occupied.size();
        for (std::size_t t = 0; t < steps; ++t) {
            step(s, t);
            double outside = 0.0;
            const auto amps = s.amplitudes();
            for (std::size_t x = 0; x < amps.size(); ++x) {
                if (static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(x))) != n) {
                    outside += std::norm(amps[x]);
                }
            }
            leak = std::max(leak, outside);
            drift = std::max(drift, std::abs(norm(s) - 1.0));
        }
    };

    RunConfig brick;
    brick.lattice = LatticeSpec(1, 32, 0.25, LatticeMode::brick1d);
    brick.kinetic = theta_params(0.9);
    brick.phi = 0.5;
    brick.potentials.external = random_smooth_field(brick.lattice, rng, 2.0);
    brick.potentials.pair = smooth_pair(brick.lattice, 1.0, 1.0);
    brick.initial.occupied = {4, 9};
    run_sector(brick);

    RunConfig small = brick;
    small.lattice = LatticeSpec(1, 10, 0.4, LatticeMode::brick1d);
    small.statistics = Statistics::fermion;
    small.potentials.external = random_smooth_field(small.lattice, rng, 2.0);
    small.potentials.pair = smooth_pair(small.lattice, 1.0, 1.0);
    small.initial.occupied = {1, 6};
    const BrickStepper small_stepper(small.lattice, small.kinetic, small.phi, small.potentials);
    run_dense_exact(small, [&](DenseState &s, std::size_t t) { small_stepper.pass(s, t); });

    RunConfig gas;
    gas.lattice = LatticeSpec(2, 4, 0.5, LatticeMode::qlga);
    gas.collision = CollisionSpec{std::exp(0.3 * I), I, std::exp(0.7 * I), 0.4};
    gas.potentials.external = random_smooth_field(gas.lattice, rng, 2.0);
    gas.potentials.pair = smooth_pair(gas.lattice, 1.0, 1.0);
    gas.initial.occupied = {2, 37};
    run_sector(gas);

    RunConfig gas_small = gas;
    gas_small.lattice = LatticeSpec(1, 4, 0.5, LatticeMode::qlga);
    gas_small.statistics = Statistics::fermion;
    gas_small.collision.statistics = Statistics::fermion;
    gas_small.potentials.external = random_smooth_field(gas_small.lattice, rng, 2.0);
    gas_small.potentials.pair = smooth_pair(gas_small.lattice, 1.0, 1.0);
    gas_small.initial.occupied = {0, 5};
    const QlgaStepper gas_stepper(gas_small.lattice, gas_small.collision, gas_small.potentials);
    run_dense_exact(gas_small, [&](DenseState &s, std::size_t) { gas_stepper.step(s); });

    return {drift <= 1e-10 && leak == 0.0,
            "max norm drift " + fmt(drift) + ", weight outside the particle sector " + fmt(leak)};
}

// 8. Dense inverse of the non-local one-step operator.
Outcome nonlocality() {
    bool pass = true;
    std::string detail = "b=0.1, a=i sqrt(0.495):";
    for (int l : {16, 64, 256}) {
        const MInverseReport r = nonlocal_m_density(cplx{0.0, std::sqrt(0.495)}, 0.1, l);
        pass = pass && r.density > 0.99 && r.crosscheck < 1e-8;
        detail += " l=" + std::to_string(l) + " " + fmt(r.density);
        const MInverseReport id = nonlocal_m_density(0.0, 1.0, l);
        pass = pass && id.density == 1.0 / l;
    }
    // Entries decay like |b|^distance, so larger |b| falls below threshold at l=256.
    const MInverseReport wide = nonlocal_m_density(cplx{0.0, 0.5}, std::sqrt(0.5), 256);
    detail += "; a=0 gives 1/l; b=sqrt(0.5), a=0.5i at l=256: " + fmt(wide.density);
    return {pass, detail};
}

// 9. Gate accounting.
Outcome complexity() {
    const GateCount g = gate_count(LatticeSpec(3, 20, 0.05, LatticeMode::qlga), 20);
    const bool estimate = g.total_estimate == 36.0 * std::pow(20.0, 6) &&
                          std::abs(g.total_estimate / 1e9 - 2.3) < 0.05;
    const bool classical = std::abs(g.log10_classical_cost - 60.0 * std::log10(20.0)) < 1e-12 &&
                           std::lround(g.log10_classical_cost) == 78;
    return {estimate && classical, "36*20^6 = " + fmt(g.total_estimate) + ", 20^60 = 10^" +
                                       fmt(g.log10_classical_cost) + ", exact exchanges " +
                                       std::to_string(g.propagation_exact)};
}

// 10. Born-rule sampling.
Outcome born_sampling() {
    SectorState s(3, 1, Statistics::hard_boson);
    s.amplitudes()[0] = 0.5;
    s.amplitudes()[1] = cplx{0.0, 0.5};
    s.amplitudes()[2] = std::sqrt(0.5);
    const std::size_t n = 100000;
    const auto first = sample_measurements(s, 2026, n);
    const auto second = sample_measurements(s, 2026, n);
    std::map<Bitstring, double> counts;
    for (const auto &x : first) {
        counts[x] += 1.0;
    }
    const std::map<Bitstring, double> expect{{"100", 0.25}, {"010", 0.25}, {"001", 0.5}};
    double chi2 = 0.0;
    for (const auto &[key, p] : expect) {
        const double e = p * static_cast<double>(n);
        chi2 += (counts[key] - e) * (counts[key] - e) / e;
    }
    // 99% critical value of chi^2 with two degrees of freedom.
    const double critical = 9.2103;
    return {chi2 < critical && first == second && counts.size() == 3,
            "chi2 = " + fmt(chi2) + " (critical " + fmt(critical) + "), identical streams: " +
                (first == second ? "yes" : "no")};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact circuit identity", exact_circuit_identity},
        {"brick dispersion and mass", brick_mass_fit},
        {"mass formula reduction", mass_formula},
        {"continuum convergence", continuum_convergence},
        {"dense vs sector equivalence", oracle_equivalence},
        {"exchange statistics", statistics_checks},
        {"conservation over 10^4 steps", conservation},
        {"non-locality of M^-1", nonlocality},
        {"complexity accounting", complexity},
        {"Born-rule sampling", born_sampling},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1,
                    criteria[k].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
