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
 * Quantum state representations over a register of q-bits.
 *
 * DenseState stores all 2^N amplitudes and is the reference used by the
 * oracles. SectorState stores only the fixed-particle-number sector,
 * indexed by sorted occupation tuples through the combinatorial number
 * system, so gate application touches only the configurations that
 * occupy the q-bits being acted on.
 *
 * Both representations interpret basis states in the canonical order of
 * ascending q-bit index. For fermions the basis state with occupied
 * q-bits c_1 < c_2 < ... is c_1^+ c_2^+ ... |0>, and gate application
 * applies the Jordan-Wigner parity of the occupied q-bits strictly
 * between the two q-bits a gate acts on.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qlga/lattice.hpp"

namespace qlga {

using cplx = std::complex<double>;

enum class Statistics { hard_boson, fermion };

std::string_view to_string(Statistics stats);
Statistics statistics_from_string(std::string_view text);

class StateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kDriftTol = 1e-9;
inline constexpr std::size_t kDefaultDenseLimit = 24;
inline constexpr std::size_t kDefaultSectorLimit = std::size_t{1} << 27;

/// 4x4 unitary in the basis {|dd>, |ud>, |du>, |uu>}, where the first
/// letter is the first q-bit the gate acts on (u = occupied).
class TwoQbitGate {
  public:
    TwoQbitGate(const Eigen::Matrix4cd &matrix, bool number_conserving,
                double tol = kAlgebraicTol);

    static TwoQbitGate identity();

    const Eigen::Matrix4cd &matrix() const { return matrix_; }
    bool number_conserving() const { return number_conserving_; }

  private:
    Eigen::Matrix4cd matrix_;
    bool number_conserving_;
};

/// Phase for an occupation pattern of a list of q-bits; bit k of the
/// pattern is the occupation of the k-th listed q-bit.
using PatternPhase = std::function<cplx(std::uint64_t pattern)>;
/// Phase for a whole basis configuration given its occupied q-bits.
using ConfigPhase = std::function<cplx(std::span<const QbitIndex> occupied)>;

/// Measurement outcome: character k is '1' when q-bit k was found occupied.
using Bitstring = std::string;

class DenseState {
  public:
    /// Vacuum state on `num_qbits` q-bits.
    explicit DenseState(std::size_t num_qbits, Statistics stats = Statistics::hard_boson,
                        std::size_t max_qbits = kDefaultDenseLimit);

    std::size_t num_qbits() const { return num_qbits_; }
    Statistics statistics() const { return stats_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }

    void apply_gate(const TwoQbitGate &gate, QbitIndex i, QbitIndex j);
    /// Applies a 2^width unitary to the contiguous q-bits [first, first + width).
    void apply_block(QbitIndex first, int width, const Eigen::MatrixXcd &unitary);
    void apply_phase(std::span<const QbitIndex> qbits, const PatternPhase &phase);
    void apply_diagonal(const ConfigPhase &phase);

  private:
    std::size_t num_qbits_;
    Statistics stats_;
    std::vector<cplx> amps_;
};

class SectorState {
  public:
    /// Zero vector over the sector of `n` particles on `num_qbits` q-bits.
    SectorState(std::size_t num_qbits, std::size_t n, Statistics stats,
                std::size_t max_size = kDefaultSectorLimit);

    std::size_t num_qbits() const { return num_qbits_; }
    std::size_t particles() const { return n_; }
    Statistics statistics() const { return stats_; }
    std::size_t size() const { return amps_.size(); }

    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }

    /// Position of a strictly ascending tuple in the amplitude array.
    std::size_t rank(std::span<const QbitIndex> config) const;
    std::vector<QbitIndex> configuration(std::size_t rank) const;

    cplx amplitude(std::span<const QbitIndex> config) const;
    void set_amplitude(std::span<const QbitIndex> config, cplx value);

    /// Calls fn(config, amplitude) for every configuration in rank order.
    void for_each(const std::function<void(std::span<const QbitIndex>, cplx)> &fn) const;

    void apply_gate(const TwoQbitGate &gate, QbitIndex i, QbitIndex j);
    void apply_block(QbitIndex first, int width, const Eigen::MatrixXcd &unitary);
    void apply_phase(std::span<const QbitIndex> qbits, const PatternPhase &phase);
    void apply_diagonal(const ConfigPhase &phase);

  private:
    std::uint64_t binom(std::size_t x, std::size_t k) const;
    void check_config(std::span<const QbitIndex> config) const;

    std::size_t num_qbits_;
    std::size_t n_;
    Statistics stats_;
    std::vector<std::uint64_t> binom_; // (num_qbits + 1) x (n + 1)
    std::vector<cplx> amps_;
};

DenseState make_dense_basis(std::size_t num_qbits, std::span<const QbitIndex> occupied,
                            Statistics stats = Statistics::hard_boson,
                            std::size_t max_qbits = kDefaultDenseLimit);
SectorState make_sector_basis(std::size_t num_qbits, std::span<const QbitIndex> occupied,
                              Statistics stats = Statistics::hard_boson);

cplx inner_product(const DenseState &lhs, const DenseState &rhs);
cplx inner_product(const SectorState &lhs, const SectorState &rhs);
double norm(const DenseState &state);
double norm(const SectorState &state);

/// Expected occupation of every q-bit.
std::vector<double> density_profile(const DenseState &state);
std::vector<double> density_profile(const SectorState &state);

/// Expected total particle number.
double particle_number(const DenseState &state);

/// Born-rule samples. The stream is a pure function of (state, seed).
std::vector<Bitstring> sample_measurements(const DenseState &state, std::uint64_t seed,
                                           std::size_t count);
std::vector<Bitstring> sample_measurements(const SectorState &state, std::uint64_t seed,
                                           std::size_t count);
Bitstring sample_measurement(const DenseState &state, std::uint64_t seed);
Bitstring sample_measurement(const SectorState &state, std::uint64_t seed);

DenseState sector_to_dense(const SectorState &sector,
                           std::size_t max_qbits = kDefaultDenseLimit);
/// Projects a dense state onto the n-particle sector; amplitude outside the
/// sector beyond `tol` is an error.
SectorState dense_to_sector(const DenseState &dense, std::size_t n, double tol = kAlgebraicTol);

} // namespace qlga
