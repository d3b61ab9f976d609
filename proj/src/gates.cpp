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
#include "qlga/gates.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qlga {

namespace {

constexpr cplx I{0.0, 1.0};

} // namespace

KineticCheck validate_kinetic(cplx a, cplx b, double tol) {
    KineticCheck check;
    check.norm_defect = std::abs(std::norm(a) + std::norm(b) - 1.0);
    check.cross_defect = std::abs(a * std::conj(b) + std::conj(a) * b);
    if (a == cplx{0.0, 0.0}) {
        check.mass = std::numeric_limits<double>::infinity();
    } else {
        const cplx m = b * I / a;
        check.mass = m.real();
        check.mass_imag = m.imag();
    }
    std::ostringstream msg;
    if (check.norm_defect > tol) {
        msg << "|a|^2 + |b|^2 = 1 violated by " << check.norm_defect << "; ";
    }
    if (check.cross_defect > tol) {
        msg << "unitarity constraint a*conj(b) + conj(a)*b = 0 violated by "
            << check.cross_defect << "; ";
    }
    check.message = msg.str();
    if (!check.message.empty()) {
        check.message.resize(check.message.size() - 2);
    }
    check.ok = check.message.empty();
    return check;
}

TwoQbitGate build_s_gate(const KineticParams &params, double phi) {
    const KineticCheck check = validate_kinetic(params.a, params.b);
    if (!check.ok) {
        throw GateError("invalid kinetic parameters: " + check.message);
    }
    if (!std::isfinite(phi)) {
        throw GateError("interaction phase must be finite");
    }
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = params.b;
    m(1, 2) = params.a;
    m(2, 1) = params.a;
    m(2, 2) = params.b;
    m(3, 3) = std::exp(-I * phi);
    return TwoQbitGate(m, true);
}

TwoQbitGate build_exchange_gate(Statistics stats) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = stats == Statistics::fermion ? -1.0 : 1.0;
    return TwoQbitGate(m, true);
}

Eigen::Matrix2cd build_external_phase(double potential, double epsilon) {
    if (!std::isfinite(potential)) {
        throw GateError("external potential must be finite");
    }
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = std::exp(-I * epsilon * epsilon * potential);
    return m;
}

TwoQbitGate build_pair_phase(double potential, double epsilon) {
    if (!std::isfinite(potential)) {
        throw GateError("pair potential must be finite");
    }
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(3, 3) = std::exp(-I * epsilon * epsilon * potential);
    return TwoQbitGate(m, true);
}

void validate_collision(const CollisionSpec &spec, double tol) {
    for (const auto &[name, value] : {std::pair<const char *, cplx>{"mu", spec.mu},
                                      {"nu", spec.nu},
                                      {"lambda", spec.lambda}}) {
        if (std::abs(std::abs(value) - 1.0) > tol) {
            throw GateError(std::string("collision eigenvalue ") + name + " must be unimodular");
        }
    }
    if (!std::isfinite(spec.phi_onsite)) {
        throw GateError("on-site interaction phase must be finite");
    }
}

IrrepProjectors irrep_projectors(int d) {
    if (d < 1) {
        throw GateError("dimension must be >= 1");
    }
    const Eigen::Index n = 2 * d;
    Eigen::MatrixXcd parity = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        parity(c ^ 1, c) = 1.0;
    }
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    IrrepProjectors p;
    p.mu = Eigen::MatrixXcd::Constant(n, n, 1.0 / static_cast<double>(n));
    p.nu = (id - parity) / 2.0;
    p.lambda = (id + parity) / 2.0 - p.mu;
    return p;
}

Eigen::MatrixXcd build_collision_matrix(const CollisionSpec &spec, int d) {
    validate_collision(spec);
    const IrrepProjectors p = irrep_projectors(d);
    return spec.mu * p.mu + spec.nu * p.nu + spec.lambda * p.lambda;
}

Eigen::MatrixXcd lift_collision(const Eigen::MatrixXcd &collision, const CollisionSpec &spec) {
    const Eigen::Index channels = collision.rows();
    if (channels != collision.cols() || channels < 1 || channels > 8) {
        throw GateError("collision matrix must be square with at most 8 channels");
    }
    const Eigen::MatrixXcd defect = collision.adjoint() * collision -
                                    Eigen::MatrixXcd::Identity(channels, channels);
    if (defect.cwiseAbs().maxCoeff() > 1e-10) {
        throw GateError("collision matrix is not unitary");
    }

    // Unitary matrices are normal, so the complex Schur form is diagonal and
    // the Schur vectors are an orthonormal eigenbasis.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(collision);
    const Eigen::MatrixXcd &t = schur.matrixT();
    const Eigen::MatrixXcd &u = schur.matrixU();
    Eigen::VectorXd angles(channels);
    for (Eigen::Index k = 0; k < channels; ++k) {
        if (std::abs(t(k, k) + 1.0) < 1e-12) {
            throw GateError("collision matrix has eigenvalue -1; principal logarithm is "
                            "ambiguous (perturb the parameters)");
        }
        angles(k) = std::arg(t(k, k));
    }
    // h = i log C, so C = exp(-i h).
    Eigen::MatrixXcd h = u * (-angles).cast<cplx>().asDiagonal() * u.adjoint();
    h = (h + h.adjoint()).eval() / 2.0;

    const bool fermion = spec.statistics == Statistics::fermion;
    const std::size_t dim = std::size_t{1} << channels;
    Eigen::MatrixXcd kinetic = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                      static_cast<Eigen::Index>(dim));
    for (std::size_t g = 0; g < dim; ++g) {
        for (Eigen::Index src = 0; src < channels; ++src) {
            if (!((g >> src) & 1u)) {
                continue;
            }
            for (Eigen::Index dst = 0; dst < channels; ++dst) {
                if (dst != src && ((g >> dst) & 1u)) {
                    continue; // target occupied
                }
                const std::size_t f = (g & ~(std::size_t{1} << src)) | (std::size_t{1} << dst);
                double sign = 1.0;
                if (fermion && dst != src) {
                    const auto lo = std::min(src, dst);
                    const auto hi = std::max(src, dst);
                    const std::size_t between =
                        ((std::size_t{1} << hi) - 1) & ~((std::size_t{2} << lo) - 1);
                    sign = (std::popcount(g & between) & 1) ? -1.0 : 1.0;
                }
                kinetic(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g)) +=
                    sign * h(dst, src);
            }
        }
    }

    // exp(-i H_kin) sector by sector; each block is Hermitian.
    Eigen::MatrixXcd lift = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim));
    for (int m = 0; m <= channels; ++m) {
        std::vector<Eigen::Index> members;
        for (std::size_t p = 0; p < dim; ++p) {
            if (std::popcount(p) == m) {
                members.push_back(static_cast<Eigen::Index>(p));
            }
        }
        const auto size = static_cast<Eigen::Index>(members.size());
        Eigen::MatrixXcd block(size, size);
        for (Eigen::Index r = 0; r < size; ++r) {
            for (Eigen::Index c = 0; c < size; ++c) {
                block(r, c) = kinetic(members[static_cast<std::size_t>(r)],
                                      members[static_cast<std::size_t>(c)]);
            }
        }
        Eigen::MatrixXcd evolved;
        if (size == 1) {
            evolved = Eigen::MatrixXcd::Constant(1, 1, std::exp(-I * block(0, 0).real()));
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(block);
            const Eigen::VectorXcd phases =
                (-I * eig.eigenvalues().cast<cplx>()).array().exp().matrix();
            evolved = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
        }
        const cplx interaction = std::exp(-I * spec.phi_onsite * (m * (m - 1) / 2.0));
        for (Eigen::Index r = 0; r < size; ++r) {
            for (Eigen::Index c = 0; c < size; ++c) {
                lift(members[static_cast<std::size_t>(r)], members[static_cast<std::size_t>(c)]) =
                    interaction * evolved(r, c);
            }
        }
    }
    return lift;
}

} // namespace qlga
