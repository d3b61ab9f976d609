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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qlga/state.hpp"

namespace qlga {

class GateError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Hopping amplitudes of the one-dimensional s-gate.
struct KineticParams {
    cplx a{0.0, 0.0};
    cplx b{1.0, 0.0};
};

/// Diagnostics from checking the kinetic unitarity constraints.
struct KineticCheck {
    bool ok = false;
    double norm_defect = 0.0;  ///< | |a|^2 + |b|^2 - 1 |
    double cross_defect = 0.0; ///< | a conj(b) + conj(a) b |
    /// Real part of m = b i / a; +inf when a = 0 (no propagation).
    double mass = 0.0;
    double mass_imag = 0.0;
    std::string message;
};

KineticCheck validate_kinetic(cplx a, cplx b, double tol = kAlgebraicTol);

/// diag-block {1, [[b, a], [a, b]], exp(-i phi)}.
TwoQbitGate build_s_gate(const KineticParams &params, double phi = 0.0);

/// Swap of two q-bits. The fermionic variant also maps |uu> to -|uu>.
TwoQbitGate build_exchange_gate(Statistics stats);

/// diag(1, exp(-i eps^2 U)) for one q-bit.
Eigen::Matrix2cd build_external_phase(double potential, double epsilon);

/// diag(1, 1, 1, exp(-i eps^2 U)) for a pair of q-bits.
TwoQbitGate build_pair_phase(double potential, double epsilon);

/**
 * On-site collision parameters of the d-dimensional automaton.
 *
 * mu acts on the constant vector, nu on parity-odd vectors and lambda on
 * the remaining parity-even vectors of the 2d single-particle channels.
 * phi_onsite is the strength of the on-site density-density interaction
 * added in the multi-particle sectors.
 */
struct CollisionSpec {
    cplx mu{1.0, 0.0};
    cplx nu{1.0, 0.0};
    cplx lambda{1.0, 0.0};
    double phi_onsite = 0.0;
    Statistics statistics = Statistics::hard_boson;
};

void validate_collision(const CollisionSpec &spec, double tol = kAlgebraicTol);

struct IrrepProjectors {
    Eigen::MatrixXcd mu;
    Eigen::MatrixXcd nu;
    Eigen::MatrixXcd lambda;
};

/// Orthogonal projectors onto the three channel irreps for dimension d.
IrrepProjectors irrep_projectors(int d);

/// 2d x 2d single-particle collision matrix mu P_mu + nu P_nu + lambda P_lambda.
Eigen::MatrixXcd build_collision_matrix(const CollisionSpec &spec, int d);

/**
 * Number-conserving lift of a single-particle collision matrix to the
 * 2^(2d)-dimensional Fock space of one site.
 *
 * With C = exp(-i h) (principal branch), returns
 * exp(-i phi sum_{c<c'} n_c n_c') exp(-i H_kin) where H_kin is the
 * quadratic lift of h. Fermionic lifts carry Jordan-Wigner signs in the
 * within-site channel order; hard-boson lifts have no signs and forbid
 * double occupancy of a channel. Local pattern bit c is channel c.
 *
 * Throws GateError if C has an eigenvalue at -1, where the principal
 * logarithm is ambiguous.
 */
Eigen::MatrixXcd lift_collision(const Eigen::MatrixXcd &collision, const CollisionSpec &spec);

} // namespace qlga
