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
#include "qlga/lattice.hpp"

#include <cmath>
#include <algorithm>

namespace qlga {

std::string_view to_string(LatticeMode mode) {
    return mode == LatticeMode::brick1d ? "brick1d" : "qlga";
}

LatticeMode lattice_mode_from_string(std::string_view text) {
    if (text == "brick1d") {
        return LatticeMode::brick1d;
    }
    if (text == "qlga") {
        return LatticeMode::qlga;
    }
    throw LatticeError("unknown lattice mode '" + std::string(text) +
                       "' (expected brick1d or qlga)");
}

LatticeSpec::LatticeSpec(int d, int l, double epsilon, LatticeMode mode)
    : d_(d), l_(l), epsilon_(epsilon), mode_(mode) {
    if (d < 1) {
        throw LatticeError("lattice dimension must be >= 1");
    }
    if (l < 2) {
        throw LatticeError("lattice side must be >= 2");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw LatticeError("lattice spacing epsilon must be positive and finite");
    }
    if (mode == LatticeMode::brick1d) {
        if (d != 1) {
            throw LatticeError("brick1d mode requires d = 1");
        }
        if (l % 2 != 0) {
            throw LatticeError("brick1d mode requires an even number of sites");
        }
    }
    channels_ = mode == LatticeMode::brick1d ? 1 : 2 * d;
    std::size_t sites = 1;
    for (int i = 0; i < d; ++i) {
        sites *= static_cast<std::size_t>(l);
    }
    sites_ = sites;
    if (num_qbits() > std::size_t{0xFFFFFFFFu}) {
        throw LatticeError("lattice has more q-bits than the 32-bit index space");
    }
}

QbitIndex LatticeSpec::qbit(std::size_t site, int channel) const {
    return static_cast<QbitIndex>(site * static_cast<std::size_t>(channels_) +
                                  static_cast<std::size_t>(channel));
}

std::vector<int> LatticeSpec::coords(std::size_t site) const {
    std::vector<int> c(static_cast<std::size_t>(d_));
    for (int i = d_ - 1; i >= 0; --i) {
        c[static_cast<std::size_t>(i)] = static_cast<int>(site % static_cast<std::size_t>(l_));
        site /= static_cast<std::size_t>(l_);
    }
    return c;
}

std::size_t LatticeSpec::site_at(const std::vector<int> &c) const {
    std::size_t site = 0;
    for (int i = 0; i < d_; ++i) {
        int x = c[static_cast<std::size_t>(i)] % l_;
        if (x < 0) {
            x += l_;
        }
        site = site * static_cast<std::size_t>(l_) + static_cast<std::size_t>(x);
    }
    return site;
}

std::size_t LatticeSpec::shift(std::size_t site, int axis, int steps) const {
    auto c = coords(site);
    c[static_cast<std::size_t>(axis)] += steps;
    return site_at(c);
}

std::pair<int, int> LatticeSpec::velocity(int channel) const {
    if (mode_ == LatticeMode::brick1d) {
        return {0, 0};
    }
    return {channel / 2, channel % 2 == 0 ? +1 : -1};
}

int LatticeSpec::parity_partner(int channel) const {
    if (mode_ == LatticeMode::brick1d) {
        return channel;
    }
    return channel ^ 1;
}

double LatticeSpec::position(std::size_t site, int axis) const {
    return epsilon_ * coords(site)[static_cast<std::size_t>(axis)];
}

LatticeSpec build_lattice(int d, int l, double epsilon, LatticeMode mode) {
    return LatticeSpec(d, l, epsilon, mode);
}

bool PairSchedule::is_disjoint() const {
    std::vector<QbitIndex> seen;
    seen.reserve(pairs.size() * 2);
    for (const auto &[p, q] : pairs) {
        if (p == q) {
            return false;
        }
        seen.push_back(p);
        seen.push_back(q);
    }
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

std::pair<PairSchedule, PairSchedule> brick_schedules(const LatticeSpec &lattice) {
    if (lattice.mode() != LatticeMode::brick1d) {
        throw LatticeError("brick schedules require a brick1d lattice");
    }
    const auto l = static_cast<QbitIndex>(lattice.side());
    PairSchedule even{ScheduleTag::brick_even, -1, {}};
    PairSchedule odd{ScheduleTag::brick_odd, -1, {}};
    for (QbitIndex j = 0; j < l; j += 2) {
        even.pairs.emplace_back(j, j + 1);
        odd.pairs.emplace_back(j + 1, (j + 2) % l);
    }
    return {even, odd};
}

std::vector<PairSchedule> advection_schedule(const LatticeSpec &lattice) {
    if (lattice.mode() != LatticeMode::qlga) {
        throw LatticeError("advection schedule requires a qlga lattice");
    }
    const int d = lattice.dimension();
    const int l = lattice.side();
    std::vector<PairSchedule> layers;
    for (int axis = 0; axis < d; ++axis) {
        const int forward = 2 * axis;
        const int backward = 2 * axis + 1;
        // (channel, s) for the reflection x -> s - x. Layer one sends
        // x -> -x on both channels; layer two completes the unit shift.
        const std::pair<int, int> stages[2][2] = {
            {{forward, 0}, {backward, 0}},
            {{forward, 1}, {backward, -1}},
        };
        for (const auto &stage : stages) {
            PairSchedule layer{ScheduleTag::advection, axis, {}};
            for (std::size_t site = 0; site < lattice.num_sites(); ++site) {
                const int x = lattice.coords(site)[static_cast<std::size_t>(axis)];
                for (const auto &[channel, s] : stage) {
                    const int y = ((s - x) % l + l) % l;
                    if (x < y) {
                        layer.pairs.emplace_back(lattice.qbit(site, channel),
                                                 lattice.qbit(lattice.shift(site, axis, y - x), channel));
                    }
                }
            }
            layers.push_back(std::move(layer));
        }
    }
    return layers;
}

std::vector<QbitIndex> compose_exchanges(std::size_t num_qbits,
                                         const std::vector<PairSchedule> &schedules) {
    // where[q]: current location of the content that started in q-bit q.
    std::vector<QbitIndex> where(num_qbits);
    std::vector<QbitIndex> holder(num_qbits);
    for (std::size_t q = 0; q < num_qbits; ++q) {
        where[q] = static_cast<QbitIndex>(q);
        holder[q] = static_cast<QbitIndex>(q);
    }
    for (const auto &schedule : schedules) {
        for (const auto &[p, q] : schedule.pairs) {
            std::swap(holder[p], holder[q]);
            where[holder[p]] = p;
            where[holder[q]] = q;
        }
    }
    return where;
}

} // namespace qlga
