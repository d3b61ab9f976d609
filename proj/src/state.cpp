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
#include "qlga/state.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

namespace qlga {

std::string_view to_string(Statistics stats) {
    return stats == Statistics::fermion ? "fermion" : "hard-boson";
}

Statistics statistics_from_string(std::string_view text) {
    if (text == "hard-boson" || text == "boson") {
        return Statistics::hard_boson;
    }
    if (text == "fermion") {
        return Statistics::fermion;
    }
    throw StateError("unknown statistics '" + std::string(text) +
                     "' (expected hard-boson or fermion)");
}

namespace {

bool is_unimodular(cplx z, double tol) { return std::abs(std::abs(z) - 1.0) <= tol; }

void check_unitary(const Eigen::MatrixXcd &u, double tol, const char *what) {
    const Eigen::MatrixXcd defect =
        u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    if (defect.cwiseAbs().maxCoeff() > tol) {
        throw StateError(std::string(what) + " is not unitary");
    }
}

// Particle-number conservation of a matrix acting on a register of q-bits,
// indexed by occupation pattern.
bool conserves_number(const Eigen::MatrixXcd &u, double tol) {
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            if (std::popcount(static_cast<std::uint64_t>(r)) !=
                    std::popcount(static_cast<std::uint64_t>(c)) &&
                std::abs(u(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

// Maps the 2x2 basis ordering {dd, ud, du, uu} onto occupation patterns
// (bit 0 = first q-bit) so the same helper serves both layouts.
bool gate_conserves_number(const Eigen::Matrix4cd &m, double tol) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const int nr = (r == 0) ? 0 : (r == 3 ? 2 : 1);
            const int nc = (c == 0) ? 0 : (c == 3 ? 2 : 1);
            if (nr != nc && std::abs(m(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

void check_pair(std::size_t num_qbits, QbitIndex i, QbitIndex j) {
    if (i == j) {
        throw StateError("gate q-bit indices collide");
    }
    if (i >= num_qbits || j >= num_qbits) {
        throw StateError("gate q-bit index out of range");
    }
}

void check_block(std::size_t num_qbits, QbitIndex first, int width,
                 const Eigen::MatrixXcd &unitary, Statistics stats) {
    if (width < 1 || width > 16 || first + static_cast<std::size_t>(width) > num_qbits) {
        throw StateError("block q-bit range out of bounds");
    }
    const Eigen::Index dim = Eigen::Index{1} << width;
    if (unitary.rows() != dim || unitary.cols() != dim) {
        throw StateError("block unitary has the wrong dimension");
    }
    check_unitary(unitary, 1e-10, "block");
    if (stats == Statistics::fermion && !conserves_number(unitary, 1e-12)) {
        throw StateError("fermionic block must conserve particle number");
    }
}

std::uint64_t uniform_bits_to_index(std::mt19937_64 &rng, const std::vector<double> &cumulative) {
    // 53 random bits -> [0, 1), independent of the standard library's
    // distribution implementations.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

std::vector<double> cumulative_probabilities(std::span<const cplx> amps) {
    std::vector<double> cumulative(amps.size());
    double total = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        total += std::norm(amps[k]);
        cumulative[k] = total;
    }
    if (std::abs(total - 1.0) > kDriftTol) {
        throw StateError("cannot sample from a state that is not normalized");
    }
    return cumulative;
}

// Visits every k-subset of {0, ..., num_qbits - 1} \ excluded in
// lexicographic order. `excluded` must be sorted.
template <typename Fn>
void for_each_subset(std::size_t num_qbits, std::span<const QbitIndex> excluded, std::size_t k,
                     std::vector<QbitIndex> &buffer, Fn &&fn) {
    const std::size_t pool = num_qbits - excluded.size();
    if (k > pool) {
        return;
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t t = 0; t < k; ++t) {
        idx[t] = t;
    }
    buffer.resize(k);
    while (true) {
        for (std::size_t t = 0; t < k; ++t) {
            auto q = static_cast<QbitIndex>(idx[t]);
            for (QbitIndex e : excluded) {
                if (q >= e) {
                    ++q;
                }
            }
            buffer[t] = q;
        }
        fn(std::span<const QbitIndex>(buffer));
        std::size_t t = k;
        while (t > 0 && idx[t - 1] == pool - k + (t - 1)) {
            --t;
        }
        if (t == 0) {
            return;
        }
        ++idx[t - 1];
        for (std::size_t u = t; u < k; ++u) {
            idx[u] = idx[u - 1] + 1;
        }
    }
}

// Merges the sorted tuple `base` with the sorted `extra` into `out`.
void merge_into(std::span<const QbitIndex> base, std::span<const QbitIndex> extra,
                std::vector<QbitIndex> &out) {
    out.resize(base.size() + extra.size());
    std::merge(base.begin(), base.end(), extra.begin(), extra.end(), out.begin());
}

} // namespace

// --- TwoQbitGate -------------------------------------------------------------

TwoQbitGate::TwoQbitGate(const Eigen::Matrix4cd &matrix, bool number_conserving, double tol)
    : matrix_(matrix), number_conserving_(number_conserving) {
    check_unitary(matrix_, tol, "two-q-bit gate");
    if (number_conserving_ && !gate_conserves_number(matrix_, tol)) {
        throw StateError("gate flagged number-conserving mixes particle-number sectors");
    }
}

TwoQbitGate TwoQbitGate::identity() { return TwoQbitGate(Eigen::Matrix4cd::Identity(), true); }

// --- DenseState --------------------------------------------------------------

DenseState::DenseState(std::size_t num_qbits, Statistics stats, std::size_t max_qbits)
    : num_qbits_(num_qbits), stats_(stats) {
    if (num_qbits == 0) {
        throw StateError("dense state needs at least one q-bit");
    }
    if (num_qbits > max_qbits || num_qbits > 40) {
        throw StateError("dense state of " + std::to_string(num_qbits) +
                         " q-bits exceeds the dense limit of " + std::to_string(max_qbits));
    }
    amps_.assign(std::size_t{1} << num_qbits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

void DenseState::apply_gate(const TwoQbitGate &gate, QbitIndex i, QbitIndex j) {
    check_pair(num_qbits_, i, j);
    if (stats_ == Statistics::fermion && !gate.number_conserving()) {
        throw StateError("fermionic gate application requires a number-conserving gate");
    }
    const std::uint64_t mi = std::uint64_t{1} << i;
    const std::uint64_t mj = std::uint64_t{1} << j;
    const QbitIndex lo = std::min(i, j);
    const QbitIndex hi = std::max(i, j);
    const std::uint64_t between = ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{2} << lo) - 1);
    const Eigen::Matrix4cd &g = gate.matrix();
    const bool fermion = stats_ == Statistics::fermion;
    const auto groups = static_cast<std::int64_t>(amps_.size() >> 2);

#pragma omp parallel for schedule(static) if (groups > 4096)
    for (std::int64_t k = 0; k < groups; ++k) {
        // Insert zero bits at positions lo and hi.
        auto base = static_cast<std::uint64_t>(k);
        base = ((base >> lo) << (lo + 1)) | (base & ((std::uint64_t{1} << lo) - 1));
        base = ((base >> hi) << (hi + 1)) | (base & ((std::uint64_t{1} << hi) - 1));
        const cplx v0 = amps_[base];
        const cplx v1 = amps_[base | mi];
        const cplx v2 = amps_[base | mj];
        const cplx v3 = amps_[base | mi | mj];
        const double s = (fermion && (std::popcount(base & between) & 1)) ? -1.0 : 1.0;
        amps_[base] = g(0, 0) * v0 + g(0, 1) * v1 + g(0, 2) * v2 + g(0, 3) * v3;
        amps_[base | mi] = g(1, 0) * v0 + g(1, 1) * v1 + s * g(1, 2) * v2 + g(1, 3) * v3;
        amps_[base | mj] = g(2, 0) * v0 + s * g(2, 1) * v1 + g(2, 2) * v2 + g(2, 3) * v3;
        amps_[base | mi | mj] = g(3, 0) * v0 + g(3, 1) * v1 + g(3, 2) * v2 + g(3, 3) * v3;
    }
}

void DenseState::apply_block(QbitIndex first, int width, const Eigen::MatrixXcd &unitary) {
    check_block(num_qbits_, first, width, unitary, stats_);
    const std::size_t dim = std::size_t{1} << width;
    const auto groups = static_cast<std::int64_t>(amps_.size() >> width);
    const std::uint64_t low_mask = (std::uint64_t{1} << first) - 1;

#pragma omp parallel for schedule(static) if (groups > 1024)
    for (std::int64_t k = 0; k < groups; ++k) {
        const auto kk = static_cast<std::uint64_t>(k);
        const std::uint64_t base = ((kk >> first) << (first + width)) | (kk & low_mask);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
        for (std::size_t p = 0; p < dim; ++p) {
            v(static_cast<Eigen::Index>(p)) = amps_[base | (p << first)];
        }
        const Eigen::VectorXcd w = unitary * v;
        for (std::size_t p = 0; p < dim; ++p) {
            amps_[base | (p << first)] = w(static_cast<Eigen::Index>(p));
        }
    }
}

void DenseState::apply_phase(std::span<const QbitIndex> qbits, const PatternPhase &phase) {
    if (qbits.size() > 20) {
        throw StateError("phase pattern spans too many q-bits");
    }
    for (QbitIndex q : qbits) {
        if (q >= num_qbits_) {
            throw StateError("phase q-bit index out of range");
        }
    }
    std::vector<cplx> table(std::size_t{1} << qbits.size());
    for (std::size_t p = 0; p < table.size(); ++p) {
        table[p] = phase(p);
        if (!is_unimodular(table[p], kAlgebraicTol)) {
            throw StateError("phase factor is not unimodular");
        }
    }
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        std::size_t p = 0;
        for (std::size_t k = 0; k < qbits.size(); ++k) {
            p |= ((idx >> qbits[k]) & 1u) << k;
        }
        amps_[idx] *= table[p];
    }
}

void DenseState::apply_diagonal(const ConfigPhase &phase) {
    std::vector<QbitIndex> occupied;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        occupied.clear();
        for (std::uint64_t bits = idx; bits != 0; bits &= bits - 1) {
            occupied.push_back(static_cast<QbitIndex>(std::countr_zero(bits)));
        }
        const cplx z = phase(occupied);
        if (!is_unimodular(z, kAlgebraicTol)) {
            throw StateError("phase factor is not unimodular");
        }
        amps_[idx] *= z;
    }
}

// --- SectorState -------------------------------------------------------------

SectorState::SectorState(std::size_t num_qbits, std::size_t n, Statistics stats,
                         std::size_t max_size)
    : num_qbits_(num_qbits), n_(n), stats_(stats) {
    if (num_qbits == 0) {
        throw StateError("sector state needs at least one q-bit");
    }
    if (n > num_qbits) {
        throw StateError("more particles than q-bits");
    }
    constexpr auto saturated = std::numeric_limits<std::uint64_t>::max();
    binom_.assign((num_qbits + 1) * (n + 1), 0);
    for (std::size_t x = 0; x <= num_qbits; ++x) {
        binom_[x * (n + 1)] = 1;
        for (std::size_t k = 1; k <= n && k <= x; ++k) {
            const std::uint64_t a = binom_[(x - 1) * (n + 1) + k - 1];
            const std::uint64_t b = binom_[(x - 1) * (n + 1) + k];
            binom_[x * (n + 1) + k] = (a > saturated - b) ? saturated : a + b;
        }
    }
    const std::uint64_t size = binom(num_qbits, n);
    if (size > max_size) {
        throw StateError("sector of " + std::to_string(n) + " particles on " +
                         std::to_string(num_qbits) + " q-bits exceeds the sector size limit");
    }
    amps_.assign(static_cast<std::size_t>(size), cplx{0.0, 0.0});
}

std::uint64_t SectorState::binom(std::size_t x, std::size_t k) const {
    return binom_[x * (n_ + 1) + k];
}

void SectorState::check_config(std::span<const QbitIndex> config) const {
    if (config.size() != n_) {
        throw StateError("configuration has the wrong particle count");
    }
    for (std::size_t k = 0; k < config.size(); ++k) {
        if (config[k] >= num_qbits_) {
            throw StateError("configuration index out of range");
        }
        if (k > 0 && config[k] <= config[k - 1]) {
            throw StateError("configuration must be strictly ascending");
        }
    }
}

std::size_t SectorState::rank(std::span<const QbitIndex> config) const {
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < config.size(); ++k) {
        r += binom(config[k], k + 1);
    }
    return static_cast<std::size_t>(r);
}

std::vector<QbitIndex> SectorState::configuration(std::size_t rank) const {
    std::vector<QbitIndex> config(n_);
    std::uint64_t r = rank;
    std::size_t upper = num_qbits_;
    for (std::size_t k = n_; k-- > 0;) {
        // Largest c < upper with C(c, k + 1) <= r.
        std::size_t lo = k;
        std::size_t hi = upper - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (binom(mid, k + 1) <= r) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        config[k] = static_cast<QbitIndex>(lo);
        r -= binom(lo, k + 1);
        upper = lo;
    }
    return config;
}

cplx SectorState::amplitude(std::span<const QbitIndex> config) const {
    check_config(config);
    return amps_[rank(config)];
}

void SectorState::set_amplitude(std::span<const QbitIndex> config, cplx value) {
    check_config(config);
    amps_[rank(config)] = value;
}

void SectorState::for_each(
    const std::function<void(std::span<const QbitIndex>, cplx)> &fn) const {
    if (amps_.empty()) {
        return;
    }
    // Lexicographic successor in colex order matches rank order.
    std::vector<QbitIndex> config(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        config[k] = static_cast<QbitIndex>(k);
    }
    for (std::size_t r = 0; r < amps_.size(); ++r) {
        fn(config, amps_[r]);
        std::size_t t = 0;
        while (t < n_ && ((t + 1 < n_) ? config[t] + 1 == config[t + 1]
                                       : config[t] + 1 == num_qbits_)) {
            ++t;
        }
        if (t == n_) {
            break;
        }
        ++config[t];
        for (std::size_t u = 0; u < t; ++u) {
            config[u] = static_cast<QbitIndex>(u);
        }
    }
}

void SectorState::apply_gate(const TwoQbitGate &gate, QbitIndex i, QbitIndex j) {
    check_pair(num_qbits_, i, j);
    if (!gate.number_conserving()) {
        throw StateError("sector states accept only number-conserving gates");
    }
    const Eigen::Matrix4cd &g = gate.matrix();
    const QbitIndex lo = std::min(i, j);
    const QbitIndex hi = std::max(i, j);
    const std::array<QbitIndex, 2> excluded{lo, hi};
    const std::array<QbitIndex, 1> with_i{i};
    const std::array<QbitIndex, 1> with_j{j};
    const bool fermion = stats_ == Statistics::fermion;
    std::vector<QbitIndex> rest;
    std::vector<QbitIndex> config;

    if (n_ >= 1) {
        for_each_subset(num_qbits_, excluded, n_ - 1, rest, [&](std::span<const QbitIndex> r) {
            merge_into(r, with_i, config);
            const std::size_t ra = rank(config);
            merge_into(r, with_j, config);
            const std::size_t rb = rank(config);
            double s = 1.0;
            if (fermion) {
                const auto inside = std::count_if(r.begin(), r.end(), [&](QbitIndex q) {
                    return q > lo && q < hi;
                });
                s = (inside & 1) ? -1.0 : 1.0;
            }
            const cplx va = amps_[ra];
            const cplx vb = amps_[rb];
            amps_[ra] = g(1, 1) * va + s * g(1, 2) * vb;
            amps_[rb] = s * g(2, 1) * va + g(2, 2) * vb;
        });
    }
    if (n_ >= 2 && g(3, 3) != cplx{1.0, 0.0}) {
        for_each_subset(num_qbits_, excluded, n_ - 2, rest, [&](std::span<const QbitIndex> r) {
            merge_into(r, excluded, config);
            amps_[rank(config)] *= g(3, 3);
        });
    }
    if (g(0, 0) != cplx{1.0, 0.0} && num_qbits_ - 2 >= n_) {
        for_each_subset(num_qbits_, excluded, n_, rest, [&](std::span<const QbitIndex> r) {
            amps_[rank(r)] *= g(0, 0);
        });
    }
}

void SectorState::apply_block(QbitIndex first, int width, const Eigen::MatrixXcd &unitary) {
    check_block(num_qbits_, first, width, unitary, stats_);
    if (!conserves_number(unitary, 1e-12)) {
        throw StateError("sector states accept only number-conserving blocks");
    }
    std::vector<QbitIndex> excluded(static_cast<std::size_t>(width));
    for (int b = 0; b < width; ++b) {
        excluded[static_cast<std::size_t>(b)] = first + static_cast<QbitIndex>(b);
    }
    std::vector<QbitIndex> rest;
    std::vector<QbitIndex> inside;
    std::vector<QbitIndex> config;
    const std::size_t dim = std::size_t{1} << width;
    for (std::size_t m = 0; m <= std::min<std::size_t>(n_, static_cast<std::size_t>(width)); ++m) {
        std::vector<std::size_t> patterns;
        for (std::size_t p = 0; p < dim; ++p) {
            if (static_cast<std::size_t>(std::popcount(p)) == m) {
                patterns.push_back(p);
            }
        }
        const auto pm = static_cast<Eigen::Index>(patterns.size());
        Eigen::MatrixXcd sub(pm, pm);
        for (Eigen::Index r = 0; r < pm; ++r) {
            for (Eigen::Index c = 0; c < pm; ++c) {
                sub(r, c) = unitary(static_cast<Eigen::Index>(patterns[static_cast<std::size_t>(r)]),
                                    static_cast<Eigen::Index>(patterns[static_cast<std::size_t>(c)]));
            }
        }
        if (pm == 1 && sub(0, 0) == cplx{1.0, 0.0}) {
            continue;
        }
        if (num_qbits_ - static_cast<std::size_t>(width) < n_ - m) {
            continue;
        }
        std::vector<std::size_t> ranks(patterns.size());
        Eigen::VectorXcd v(pm);
        for_each_subset(num_qbits_, excluded, n_ - m, rest, [&](std::span<const QbitIndex> r) {
            for (std::size_t t = 0; t < patterns.size(); ++t) {
                inside.clear();
                for (int b = 0; b < width; ++b) {
                    if ((patterns[t] >> b) & 1u) {
                        inside.push_back(first + static_cast<QbitIndex>(b));
                    }
                }
                merge_into(r, inside, config);
                ranks[t] = rank(config);
                v(static_cast<Eigen::Index>(t)) = amps_[ranks[t]];
            }
            const Eigen::VectorXcd w = sub * v;
            for (std::size_t t = 0; t < patterns.size(); ++t) {
                amps_[ranks[t]] = w(static_cast<Eigen::Index>(t));
            }
        });
    }
}

void SectorState::apply_phase(std::span<const QbitIndex> qbits, const PatternPhase &phase) {
    if (qbits.size() > 20) {
        throw StateError("phase pattern spans too many q-bits");
    }
    for (QbitIndex q : qbits) {
        if (q >= num_qbits_) {
            throw StateError("phase q-bit index out of range");
        }
    }
    std::vector<cplx> table(std::size_t{1} << qbits.size());
    for (std::size_t p = 0; p < table.size(); ++p) {
        table[p] = phase(p);
        if (!is_unimodular(table[p], kAlgebraicTol)) {
            throw StateError("phase factor is not unimodular");
        }
    }
    std::size_t r = 0;
    for_each([&](std::span<const QbitIndex> config, cplx) {
        std::size_t p = 0;
        for (std::size_t k = 0; k < qbits.size(); ++k) {
            if (std::binary_search(config.begin(), config.end(), qbits[k])) {
                p |= std::size_t{1} << k;
            }
        }
        amps_[r++] *= table[p];
    });
}

void SectorState::apply_diagonal(const ConfigPhase &phase) {
    std::size_t r = 0;
    for_each([&](std::span<const QbitIndex> config, cplx) {
        const cplx z = phase(config);
        if (!is_unimodular(z, kAlgebraicTol)) {
            throw StateError("phase factor is not unimodular");
        }
        amps_[r++] *= z;
    });
}

// --- free functions ----------------------------------------------------------

namespace {

std::vector<QbitIndex> validated_occupation(std::size_t num_qbits,
                                            std::span<const QbitIndex> occupied) {
    std::vector<QbitIndex> sorted(occupied.begin(), occupied.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw StateError("duplicate occupied q-bit index");
    }
    if (!sorted.empty() && sorted.back() >= num_qbits) {
        throw StateError("occupied q-bit index out of range");
    }
    return sorted;
}

} // namespace

DenseState make_dense_basis(std::size_t num_qbits, std::span<const QbitIndex> occupied,
                            Statistics stats, std::size_t max_qbits) {
    const auto sorted = validated_occupation(num_qbits, occupied);
    DenseState state(num_qbits, stats, max_qbits);
    std::uint64_t idx = 0;
    for (QbitIndex q : sorted) {
        idx |= std::uint64_t{1} << q;
    }
    state.amplitudes()[0] = 0.0;
    state.amplitudes()[idx] = 1.0;
    return state;
}

SectorState make_sector_basis(std::size_t num_qbits, std::span<const QbitIndex> occupied,
                              Statistics stats) {
    const auto sorted = validated_occupation(num_qbits, occupied);
    SectorState state(num_qbits, sorted.size(), stats);
    state.set_amplitude(sorted, 1.0);
    return state;
}

cplx inner_product(const DenseState &lhs, const DenseState &rhs) {
    if (lhs.num_qbits() != rhs.num_qbits()) {
        throw StateError("inner product of states with different q-bit counts");
    }
    cplx acc{0.0, 0.0};
    const auto a = lhs.amplitudes();
    const auto b = rhs.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

cplx inner_product(const SectorState &lhs, const SectorState &rhs) {
    if (lhs.num_qbits() != rhs.num_qbits() || lhs.particles() != rhs.particles()) {
        throw StateError("inner product of states from different sectors");
    }
    cplx acc{0.0, 0.0};
    const auto a = lhs.amplitudes();
    const auto b = rhs.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

double norm(const DenseState &state) { return std::sqrt(inner_product(state, state).real()); }
double norm(const SectorState &state) { return std::sqrt(inner_product(state, state).real()); }

std::vector<double> density_profile(const DenseState &state) {
    std::vector<double> rho(state.num_qbits(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const double p = std::norm(amps[idx]);
        if (p == 0.0) {
            continue;
        }
        for (std::uint64_t bits = idx; bits != 0; bits &= bits - 1) {
            rho[static_cast<std::size_t>(std::countr_zero(bits))] += p;
        }
    }
    return rho;
}

std::vector<double> density_profile(const SectorState &state) {
    std::vector<double> rho(state.num_qbits(), 0.0);
    state.for_each([&](std::span<const QbitIndex> config, cplx amp) {
        const double p = std::norm(amp);
        for (QbitIndex q : config) {
            rho[q] += p;
        }
    });
    return rho;
}

double particle_number(const DenseState &state) {
    double total = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        total += std::norm(amps[idx]) * std::popcount(static_cast<std::uint64_t>(idx));
    }
    return total;
}

std::vector<Bitstring> sample_measurements(const DenseState &state, std::uint64_t seed,
                                           std::size_t count) {
    const auto cumulative = cumulative_probabilities(state.amplitudes());
    std::mt19937_64 rng(seed);
    std::vector<Bitstring> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const std::uint64_t idx = uniform_bits_to_index(rng, cumulative);
        Bitstring bits(state.num_qbits(), '0');
        for (std::size_t q = 0; q < state.num_qbits(); ++q) {
            if ((idx >> q) & 1u) {
                bits[q] = '1';
            }
        }
        out.push_back(std::move(bits));
    }
    return out;
}

std::vector<Bitstring> sample_measurements(const SectorState &state, std::uint64_t seed,
                                           std::size_t count) {
    const auto cumulative = cumulative_probabilities(state.amplitudes());
    std::mt19937_64 rng(seed);
    std::vector<Bitstring> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const std::uint64_t r = uniform_bits_to_index(rng, cumulative);
        Bitstring bits(state.num_qbits(), '0');
        for (QbitIndex q : state.configuration(static_cast<std::size_t>(r))) {
            bits[q] = '1';
        }
        out.push_back(std::move(bits));
    }
    return out;
}

Bitstring sample_measurement(const DenseState &state, std::uint64_t seed) {
    return sample_measurements(state, seed, 1).front();
}

Bitstring sample_measurement(const SectorState &state, std::uint64_t seed) {
    return sample_measurements(state, seed, 1).front();
}

DenseState sector_to_dense(const SectorState &sector, std::size_t max_qbits) {
    DenseState dense(sector.num_qbits(), sector.statistics(), max_qbits);
    auto out = dense.amplitudes();
    out[0] = 0.0;
    sector.for_each([&](std::span<const QbitIndex> config, cplx amp) {
        std::uint64_t idx = 0;
        for (QbitIndex q : config) {
            idx |= std::uint64_t{1} << q;
        }
        out[idx] = amp;
    });
    return dense;
}

SectorState dense_to_sector(const DenseState &dense, std::size_t n, double tol) {
    SectorState sector(dense.num_qbits(), n, dense.statistics());
    const auto amps = dense.amplitudes();
    std::vector<QbitIndex> config;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(idx))) != n) {
            if (std::abs(amps[idx]) > tol) {
                throw StateError("dense state has amplitude outside the requested sector");
            }
            continue;
        }
        config.clear();
        for (std::uint64_t bits = idx; bits != 0; bits &= bits - 1) {
            config.push_back(static_cast<QbitIndex>(std::countr_zero(bits)));
        }
        sector.amplitudes()[sector.rank(config)] = amps[idx];
    }
    return sector;
}

} // namespace qlga
