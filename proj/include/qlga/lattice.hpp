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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qlga {

using QbitIndex = std::uint32_t;

class LatticeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class LatticeMode { brick1d, qlga };

std::string_view to_string(LatticeMode mode);
LatticeMode lattice_mode_from_string(std::string_view text);

/**
 * Periodic cartesian lattice with `l` sites per axis and spacing `epsilon`.
 *
 * Q-bit layout: channel-major within a site, sites row-major with axis 0
 * varying slowest, i.e. qbit = site * channels_per_site + channel.
 * In qlga mode channel 2*i carries velocity +e_i and channel 2*i+1 carries -e_i.
 */
class LatticeSpec {
  public:
    LatticeSpec(int d, int l, double epsilon, LatticeMode mode);

    int dimension() const { return d_; }
    int side() const { return l_; }
    double epsilon() const { return epsilon_; }
    LatticeMode mode() const { return mode_; }
    int channels_per_site() const { return channels_; }

    std::size_t num_sites() const { return sites_; }
    std::size_t num_qbits() const { return sites_ * static_cast<std::size_t>(channels_); }

    QbitIndex qbit(std::size_t site, int channel) const;
    std::size_t site_of(QbitIndex q) const { return q / static_cast<QbitIndex>(channels_); }
    int channel_of(QbitIndex q) const { return static_cast<int>(q % static_cast<QbitIndex>(channels_)); }

    std::vector<int> coords(std::size_t site) const;
    std::size_t site_at(const std::vector<int> &coords) const;
    /// Site reached by moving `steps` along `axis`, with periodic wrap.
    std::size_t shift(std::size_t site, int axis, int steps) const;

    /// Velocity of a channel as (axis, sign). Brick mode has no velocities.
    std::pair<int, int> velocity(int channel) const;
    /// Channel carrying the opposite velocity.
    int parity_partner(int channel) const;

    /// Physical position of a site along `axis`: coord * epsilon.
    double position(std::size_t site, int axis = 0) const;

    bool operator==(const LatticeSpec &) const = default;

  private:
    int d_;
    int l_;
    double epsilon_;
    LatticeMode mode_;
    int channels_;
    std::size_t sites_;
};

LatticeSpec build_lattice(int d, int l, double epsilon, LatticeMode mode);

enum class ScheduleTag { brick_even, brick_odd, advection };

/// Disjoint q-bit pairs that can be acted on in one parallel layer.
struct PairSchedule {
    ScheduleTag tag;
    int axis = -1; ///< advection axis, -1 for brick schedules
    std::vector<std::pair<QbitIndex, QbitIndex>> pairs;

    /// True when no q-bit index appears in more than one pair.
    bool is_disjoint() const;
};

/// Even (M1) and odd (M2) brick pairings. The odd pairing wraps (l-1, 0).
std::pair<PairSchedule, PairSchedule> brick_schedules(const LatticeSpec &lattice);

/**
 * Exchange layers realizing one advection step: every (site x, velocity v)
 * q-bit moves to (x + v, v).
 *
 * Each axis contributes two layers. A unit shift along a line is the
 * product of the reflections x -> -x and x -> s - x (s = +1 for the
 * forward channel, -1 for the backward one), and each reflection is a set
 * of disjoint transpositions. Layers are ordered axis 0..d-1, reflection
 * x -> -x first, pairs ascending by site.
 */
std::vector<PairSchedule> advection_schedule(const LatticeSpec &lattice);

/// Permutation of q-bit indices effected by applying `schedules` in order:
/// result[q] is where the content of q-bit q ends up.
std::vector<QbitIndex> compose_exchanges(std::size_t num_qbits,
                                         const std::vector<PairSchedule> &schedules);

} // namespace qlga
