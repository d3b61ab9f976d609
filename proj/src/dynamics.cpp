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
#include "qlga/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace qlga {

namespace {

constexpr cplx I{0.0, 1.0};

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int k = 0; k < exp; ++k) {
        r *= base;
    }
    return r;
}

void check_field(const LatticeSpec &lattice, const PotentialField &field) {
    if (field.values.size() != lattice.num_sites()) {
        throw DynamicsError("external potential has " + std::to_string(field.values.size()) +
                            " values for " + std::to_string(lattice.num_sites()) + " sites");
    }
}

} // namespace

PairPotential::PairPotential(std::size_t sites, std::vector<double> table)
    : sites_(sites), table_(std::move(table)) {
    if (table_.size() != sites * sites) {
        throw DynamicsError("pair potential table must be sites x sites");
    }
    for (std::size_t x = 0; x < sites; ++x) {
        for (std::size_t y = 0; y < sites; ++y) {
            const double u = table_[x * sites + y];
            if (!std::isfinite(u)) {
                throw DynamicsError("pair potential must be finite");
            }
            if (u != table_[y * sites + x]) {
                throw DynamicsError("pair potential must be symmetric");
            }
        }
    }
}

template <typename State>
void external_potential_pass(State &state, const LatticeSpec &lattice, const PotentialField &field,
                             double angle_scale) {
    check_field(lattice, field);
    const double eps2 = lattice.epsilon() * lattice.epsilon() * angle_scale;
    state.apply_diagonal([&](std::span<const QbitIndex> occupied) {
        double total = 0.0;
        for (QbitIndex q : occupied) {
            total += field.values[lattice.site_of(q)];
        }
        return std::exp(-I * eps2 * total);
    });
}

template <typename State>
void pair_potential_pass(State &state, const LatticeSpec &lattice, const PairPotential &pair,
                         double angle_scale) {
    if (pair.sites() != lattice.num_sites()) {
        throw DynamicsError("pair potential does not match the lattice");
    }
    const double eps2 = lattice.epsilon() * lattice.epsilon() * angle_scale;
    state.apply_diagonal([&](std::span<const QbitIndex> occupied) {
        double total = 0.0;
        for (std::size_t a = 0; a < occupied.size(); ++a) {
            const std::size_t x = lattice.site_of(occupied[a]);
            for (std::size_t b = a + 1; b < occupied.size(); ++b) {
                total += pair(x, lattice.site_of(occupied[b]));
            }
        }
        return std::exp(-I * eps2 * total);
    });
}

// --- brick ------------------------------------------------------------------------

BrickStepper::BrickStepper(LatticeSpec lattice, KineticParams params, double phi,
                           Potentials potentials)
    : lattice_(std::move(lattice)), s_gate_(build_s_gate(params, phi)),
      potentials_(std::move(potentials)) {
    auto [even, odd] = brick_schedules(lattice_);
    even_ = std::move(even);
    odd_ = std::move(odd);
    if (potentials_.external) {
        check_field(lattice_, *potentials_.external);
    }
    if (potentials_.pair && potentials_.pair->sites() != lattice_.num_sites()) {
        throw DynamicsError("pair potential does not match the lattice");
    }
}

template <typename State> void BrickStepper::step(State &state, BrickParity parity) const {
    if (state.num_qbits() != lattice_.num_qbits()) {
        throw DynamicsError("state does not match the brick lattice");
    }
    const PairSchedule &schedule = parity == BrickParity::even ? even_ : odd_;
    for (const auto &[i, j] : schedule.pairs) {
        state.apply_gate(s_gate_, i, j);
    }
    if (potentials_.external) {
        external_potential_pass(state, lattice_, *potentials_.external);
    }
    if (potentials_.pair) {
        if (potentials_.cadence == PairCadence::per_pass) {
            pair_potential_pass(state, lattice_, *potentials_.pair);
        } else if (parity == BrickParity::even) {
            pair_potential_pass(state, lattice_, *potentials_.pair, 2.0);
        }
    }
}

// --- lattice gas ------------------------------------------------------------------

QlgaStepper::QlgaStepper(LatticeSpec lattice, const CollisionSpec &collision, Potentials potentials)
    : QlgaStepper(lattice,
                  lift_collision(build_collision_matrix(collision, lattice.dimension()), collision),
                  collision.statistics, std::move(potentials)) {}

QlgaStepper::QlgaStepper(LatticeSpec lattice, Eigen::MatrixXcd collision_lift, Statistics stats,
                         Potentials potentials)
    : lattice_(std::move(lattice)), lift_(std::move(collision_lift)),
      exchange_(build_exchange_gate(stats)), potentials_(std::move(potentials)) {
    if (lattice_.mode() != LatticeMode::qlga) {
        throw DynamicsError("lattice-gas stepper needs a qlga lattice");
    }
    const Eigen::Index dim = Eigen::Index{1} << lattice_.channels_per_site();
    if (lift_.rows() != dim || lift_.cols() != dim) {
        throw DynamicsError("collision lift does not match " +
                            std::to_string(lattice_.channels_per_site()) + " channels per site");
    }
    advection_ = advection_schedule(lattice_);
    identity_collision_ = (lift_ - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() == 0.0;
    if (potentials_.external) {
        check_field(lattice_, *potentials_.external);
    }
    if (potentials_.pair && potentials_.pair->sites() != lattice_.num_sites()) {
        throw DynamicsError("pair potential does not match the lattice");
    }
}

template <typename State> void QlgaStepper::advect(State &state) const {
    for (const auto &layer : advection_) {
        for (const auto &[p, q] : layer.pairs) {
            state.apply_gate(exchange_, p, q);
        }
    }
}

template <typename State> void QlgaStepper::collide(State &state) const {
    if (identity_collision_) {
        return;
    }
    const int width = lattice_.channels_per_site();
    for (std::size_t site = 0; site < lattice_.num_sites(); ++site) {
        state.apply_block(lattice_.qbit(site, 0), width, lift_);
    }
}

template <typename State> void QlgaStepper::step(State &state) const {
    if (state.num_qbits() != lattice_.num_qbits()) {
        throw DynamicsError("state does not match the lattice-gas lattice");
    }
    if (state.statistics() == Statistics::fermion &&
        exchange_.matrix()(3, 3) != cplx{-1.0, 0.0}) {
        throw DynamicsError("fermionic state needs a fermionic stepper");
    }
    advect(state);
    collide(state);
    if (potentials_.external) {
        external_potential_pass(state, lattice_, *potentials_.external);
    }
    if (potentials_.pair) {
        pair_potential_pass(state, lattice_, *potentials_.pair);
    }
}

// --- runs ---------------------------------------------------------------------------

namespace {

double wrapped_offset(double x, double centre, double period) {
    double dx = std::fmod(x - centre, period);
    if (dx < -period / 2) {
        dx += period;
    } else if (dx >= period / 2) {
        dx -= period;
    }
    return dx;
}

// Single-particle amplitude of a Gaussian packet on one q-bit.
cplx packet_amplitude(const LatticeSpec &lattice, QbitIndex q, double centre, double sigma,
                      double k0) {
    const double period = lattice.side() * lattice.epsilon();
    const std::size_t site = lattice.site_of(q);
    cplx amp = 1.0;
    for (int axis = 0; axis < lattice.dimension(); ++axis) {
        const double dx = wrapped_offset(lattice.position(site, axis), centre, period);
        amp *= std::exp(-dx * dx / (4.0 * sigma * sigma));
        if (axis == 0) {
            amp *= std::exp(I * k0 * (centre + dx));
        }
    }
    return amp / std::sqrt(static_cast<double>(lattice.channels_per_site()));
}

void normalize(SectorState &state) {
    const double nrm = norm(state);
    if (nrm == 0.0) {
        throw DynamicsError("initial state has zero norm");
    }
    for (cplx &a : state.amplitudes()) {
        a /= nrm;
    }
}

template <typename State> std::size_t particle_count(const State &state);

template <> std::size_t particle_count(const SectorState &state) { return state.particles(); }

template <> std::size_t particle_count(const DenseState &state) {
    return static_cast<std::size_t>(std::llround(particle_number(state)));
}

template <typename State>
TraceRow observe_any(const State &state, const LatticeSpec &lattice, std::size_t step,
                     bool with_density) {
    TraceRow row;
    row.step = step;
    row.time = static_cast<double>(step) * lattice.epsilon() * lattice.epsilon();
    row.norm = norm(state);
    row.particles = particle_count(state);
    const std::vector<double> rho = density_profile(state);
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t q = 0; q < rho.size(); ++q) {
        const double x = lattice.position(lattice.site_of(static_cast<QbitIndex>(q)), 0);
        mass += rho[q];
        first += rho[q] * x;
    }
    if (mass > 0.0) {
        row.centroid = first / mass;
        double second = 0.0;
        for (std::size_t q = 0; q < rho.size(); ++q) {
            const double dx =
                lattice.position(lattice.site_of(static_cast<QbitIndex>(q)), 0) - row.centroid;
            second += rho[q] * dx * dx;
        }
        row.width = std::sqrt(second / mass);
    }
    if (with_density) {
        row.density = rho;
    }
    return row;
}

template <typename State, typename StepFn>
std::vector<TraceRow> drive(State &state, const RunConfig &config, StepFn &&step_fn) {
    std::vector<TraceRow> trace;
    const auto &lattice = config.lattice;
    trace.push_back(observe_any(state, lattice, 0, config.record_density));
    for (std::size_t t = 0; t < config.steps; ++t) {
        step_fn(state, t);
        const double drift = std::abs(norm(state) - 1.0);
        if (!(drift <= config.norm_tolerance)) {
            throw InvariantBreach("norm drifted by " + std::to_string(drift) + " at step " +
                                  std::to_string(t + 1));
        }
        const std::size_t done = t + 1;
        if (done == config.steps || (config.observe_every > 0 && done % config.observe_every == 0)) {
            trace.push_back(observe_any(state, lattice, done, config.record_density));
        }
    }
    return trace;
}

template <typename State> std::vector<TraceRow> run_engine(State &state, const RunConfig &config) {
    if (config.lattice.mode() == LatticeMode::brick1d) {
        const BrickStepper stepper(config.lattice, config.kinetic, config.phi, config.potentials);
        return drive(state, config,
                     [&](State &s, std::size_t t) { stepper.pass(s, t); });
    }
    CollisionSpec collision = config.collision;
    collision.statistics = config.statistics;
    const QlgaStepper stepper(config.lattice, collision, config.potentials);
    return drive(state, config, [&](State &s, std::size_t) { stepper.step(s); });
}

} // namespace

TraceRow observe(const SectorState &state, const LatticeSpec &lattice, std::size_t step,
                 bool with_density) {
    return observe_any(state, lattice, step, with_density);
}

SectorState prepare_initial(const RunConfig &config) {
    const LatticeSpec &lattice = config.lattice;
    const std::size_t nq = lattice.num_qbits();
    const InitialState &init = config.initial;
    switch (init.kind) {
    case InitialKind::basis:
        return make_sector_basis(nq, init.occupied, config.statistics);
    case InitialKind::gaussian: {
        if (!(init.sigma > 0.0)) {
            throw DynamicsError("packet width must be positive");
        }
        SectorState state(nq, 1, config.statistics);
        for (QbitIndex q = 0; q < nq; ++q) {
            state.amplitudes()[q] = packet_amplitude(lattice, q, init.x0, init.sigma, init.k0);
        }
        normalize(state);
        return state;
    }
    case InitialKind::gaussian_pair: {
        if (!(init.sigma > 0.0)) {
            throw DynamicsError("packet width must be positive");
        }
        SectorState state(nq, 2, config.statistics);
        const double sign = config.statistics == Statistics::fermion ? -1.0 : 1.0;
        std::vector<cplx> f(nq);
        std::vector<cplx> g(nq);
        for (QbitIndex q = 0; q < nq; ++q) {
            f[q] = packet_amplitude(lattice, q, init.x0, init.sigma, init.k0);
            g[q] = packet_amplitude(lattice, q, init.x1, init.sigma, init.k1);
        }
        std::size_t r = 0;
        auto amps = state.amplitudes();
        state.for_each([&](std::span<const QbitIndex> c, cplx) {
            amps[r++] = f[c[0]] * g[c[1]] + sign * f[c[1]] * g[c[0]];
        });
        normalize(state);
        return state;
    }
    }
    throw DynamicsError("unknown initial state kind");
}

RunResult<SectorState> run(const RunConfig &config) {
    SectorState state = prepare_initial(config);
    auto trace = run_engine(state, config);
    return {std::move(state), std::move(trace)};
}

RunResult<SectorState> run_brick(const RunConfig &config) {
    if (config.lattice.mode() != LatticeMode::brick1d) {
        throw DynamicsError("run_brick needs a brick1d lattice");
    }
    return run(config);
}

RunResult<SectorState> run_qlga(const RunConfig &config) {
    if (config.lattice.mode() != LatticeMode::qlga) {
        throw DynamicsError("run_qlga needs a qlga lattice");
    }
    return run(config);
}

RunResult<DenseState> run_dense(const RunConfig &config) {
    DenseState state = sector_to_dense(prepare_initial(config));
    auto trace = run_engine(state, config);
    return {std::move(state), std::move(trace)};
}

GateCount gate_count(const LatticeSpec &lattice, std::size_t particles) {
    GateCount gc;
    gc.d = lattice.dimension();
    gc.l = lattice.side();
    gc.particles = particles;
    gc.mode = lattice.mode();
    gc.num_qbits = lattice.num_qbits();
    const auto l = static_cast<std::uint64_t>(gc.l);
    const int d = gc.d;
    const std::uint64_t sites = lattice.num_sites();
    if (lattice.mode() == LatticeMode::brick1d) {
        gc.propagation_exact = l / 2;
        gc.collision_exact = 0;
    } else {
        gc.propagation_exact = 2 * static_cast<std::uint64_t>(d) * ipow(l, d - 1) * (l - 1);
        gc.collision_exact = sites * static_cast<std::uint64_t>(d) * (2 * static_cast<std::uint64_t>(d) - 1);
    }
    gc.interaction_exact = gc.num_qbits * (gc.num_qbits - 1) / 2;
    gc.external_exact = gc.num_qbits;
    const double ld = std::pow(static_cast<double>(gc.l), d);
    gc.propagation_estimate = d * ld;
    gc.collision_estimate = static_cast<double>(d) * d * ld;
    gc.interaction_estimate = static_cast<double>(d) * d * ld * ld;
    gc.total_estimate = 4.0 * d * d * ld * ld;
    gc.log10_classical_cost =
        static_cast<double>(d) * static_cast<double>(particles) * std::log10(static_cast<double>(gc.l));
    gc.classical_cost = std::pow(static_cast<double>(gc.l), static_cast<double>(d) * static_cast<double>(particles));
    return gc;
}

template void external_potential_pass(SectorState &, const LatticeSpec &, const PotentialField &,
                                      double);
template void external_potential_pass(DenseState &, const LatticeSpec &, const PotentialField &,
                                      double);
template void pair_potential_pass(SectorState &, const LatticeSpec &, const PairPotential &, double);
template void pair_potential_pass(DenseState &, const LatticeSpec &, const PairPotential &, double);
template void BrickStepper::step(SectorState &, BrickParity) const;
template void BrickStepper::step(DenseState &, BrickParity) const;
template void QlgaStepper::advect(SectorState &) const;
template void QlgaStepper::advect(DenseState &) const;
template void QlgaStepper::collide(SectorState &) const;
template void QlgaStepper::collide(DenseState &) const;
template void QlgaStepper::step(SectorState &) const;
template void QlgaStepper::step(DenseState &) const;

} // namespace qlga
