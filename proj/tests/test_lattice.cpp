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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "qlga/lattice.hpp"

using namespace qlga;

namespace {

// Independent index arithmetic: site = sum_k x_k l^(d-1-k), axis 0 slowest.
std::size_t site_of_coords(const std::vector<int> &x, int l) {
    std::size_t s = 0;
    for (int c : x) {
        s = s * static_cast<std::size_t>(l) + static_cast<std::size_t>(c);
    }
    return s;
}

std::vector<int> coords_of_site(std::size_t s, int d, int l) {
    std::vector<int> x(static_cast<std::size_t>(d));
    for (int k = d - 1; k >= 0; --k) {
        x[static_cast<std::size_t>(k)] = static_cast<int>(s % static_cast<std::size_t>(l));
        s /= static_cast<std::size_t>(l);
    }
    return x;
}

} // namespace

TEST_CASE("lattice rejects invalid geometry") {
    CHECK_THROWS_AS(LatticeSpec(0, 4, 0.1, LatticeMode::qlga), LatticeError);
    CHECK_THROWS_AS(LatticeSpec(1, 1, 0.1, LatticeMode::qlga), LatticeError);
    CHECK_THROWS_AS(LatticeSpec(1, 4, 0.0, LatticeMode::qlga), LatticeError);
    CHECK_THROWS_AS(LatticeSpec(1, 4, -1.0, LatticeMode::brick1d), LatticeError);
    CHECK_THROWS_AS(LatticeSpec(2, 4, 0.1, LatticeMode::brick1d), LatticeError);
    CHECK_THROWS_AS(LatticeSpec(1, 5, 0.1, LatticeMode::brick1d), LatticeError);
    CHECK_THROWS_AS(lattice_mode_from_string("hex"), LatticeError);
    CHECK(lattice_mode_from_string(to_string(LatticeMode::qlga)) == LatticeMode::qlga);
}

TEST_CASE("q-bit indexing matches row-major layout") {
    const LatticeSpec lat(3, 3, 0.5, LatticeMode::qlga);
    CHECK(lat.channels_per_site() == 6);
    CHECK(lat.num_sites() == 27);
    CHECK(lat.num_qbits() == 162);
    for (std::size_t s = 0; s < lat.num_sites(); ++s) {
        const auto x = coords_of_site(s, 3, 3);
        CHECK(lat.coords(s) == x);
        CHECK(lat.site_at(x) == site_of_coords(x, 3));
        for (int c = 0; c < 6; ++c) {
            const QbitIndex q = lat.qbit(s, c);
            CHECK(q == s * 6 + static_cast<std::size_t>(c));
            CHECK(lat.site_of(q) == s);
            CHECK(lat.channel_of(q) == c);
        }
        CHECK(lat.position(s, 1) == doctest::Approx(0.5 * x[1]));
    }
}

TEST_CASE("velocities and parity partners") {
    const LatticeSpec lat(2, 4, 1.0, LatticeMode::qlga);
    CHECK(lat.velocity(0) == std::pair{0, 1});
    CHECK(lat.velocity(1) == std::pair{0, -1});
    CHECK(lat.velocity(2) == std::pair{1, 1});
    CHECK(lat.velocity(3) == std::pair{1, -1});
    for (int c = 0; c < 4; ++c) {
        const int p = lat.parity_partner(c);
        CHECK(lat.parity_partner(p) == c);
        CHECK(lat.velocity(p).first == lat.velocity(c).first);
        CHECK(lat.velocity(p).second == -lat.velocity(c).second);
    }
    const LatticeSpec brick(1, 8, 0.1, LatticeMode::brick1d);
    CHECK(brick.channels_per_site() == 1);
    CHECK(brick.num_qbits() == 8);
}

TEST_CASE("periodic shift") {
    const LatticeSpec lat(2, 5, 1.0, LatticeMode::qlga);
    for (std::size_t s = 0; s < lat.num_sites(); ++s) {
        for (int axis = 0; axis < 2; ++axis) {
            for (int steps : {-7, -1, 0, 1, 3, 12}) {
                auto x = coords_of_site(s, 2, 5);
                x[static_cast<std::size_t>(axis)] = ((x[static_cast<std::size_t>(axis)] + steps) % 5 + 5) % 5;
                CHECK(lat.shift(s, axis, steps) == site_of_coords(x, 5));
            }
        }
    }
}

TEST_CASE("brick schedules pair neighbours with periodic wrap") {
    const LatticeSpec lat(1, 8, 0.1, LatticeMode::brick1d);
    const auto [even, odd] = brick_schedules(lat);
    CHECK(even.tag == ScheduleTag::brick_even);
    CHECK(odd.tag == ScheduleTag::brick_odd);
    REQUIRE(even.pairs.size() == 4);
    REQUIRE(odd.pairs.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(even.pairs[j] == std::pair<QbitIndex, QbitIndex>{2 * j, 2 * j + 1});
        CHECK(odd.pairs[j] == std::pair<QbitIndex, QbitIndex>{2 * j + 1, (2 * j + 2) % 8});
    }
    CHECK(even.is_disjoint());
    CHECK(odd.is_disjoint());
    CHECK_THROWS_AS(brick_schedules(LatticeSpec(1, 8, 0.1, LatticeMode::qlga)), LatticeError);
}

TEST_CASE("advection layers shift every channel by its velocity") {
    for (int d : {1, 2, 3}) {
        for (int l : {2, 3, 4, 5}) {
            if (d == 3 && l > 4) {
                continue;
            }
            CAPTURE(d);
            CAPTURE(l);
            const LatticeSpec lat(d, l, 1.0, LatticeMode::qlga);
            const auto layers = advection_schedule(lat);
            CHECK(layers.size() == static_cast<std::size_t>(2 * d));
            std::size_t exchanges = 0;
            for (const auto &layer : layers) {
                CHECK(layer.tag == ScheduleTag::advection);
                CHECK(layer.is_disjoint());
                exchanges += layer.pairs.size();
            }
            std::size_t lines = 1;
            for (int k = 0; k < d - 1; ++k) {
                lines *= static_cast<std::size_t>(l);
            }
            CHECK(exchanges == 2 * static_cast<std::size_t>(d) * lines * static_cast<std::size_t>(l - 1));

            const auto where = compose_exchanges(lat.num_qbits(), layers);
            const int ch = 2 * d;
            for (std::size_t s = 0; s < lat.num_sites(); ++s) {
                for (int c = 0; c < ch; ++c) {
                    auto x = coords_of_site(s, d, l);
                    const int axis = c / 2;
                    const int v = c % 2 == 0 ? 1 : -1;
                    x[static_cast<std::size_t>(axis)] = (x[static_cast<std::size_t>(axis)] + v + l) % l;
                    const std::size_t target = site_of_coords(x, l) * static_cast<std::size_t>(ch) +
                                               static_cast<std::size_t>(c);
                    CHECK(where[s * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c)] == target);
                }
            }
        }
    }
}

TEST_CASE("compose_exchanges is a permutation") {
    const LatticeSpec lat(2, 3, 1.0, LatticeMode::qlga);
    const auto where = compose_exchanges(lat.num_qbits(), advection_schedule(lat));
    const std::set<QbitIndex> image(where.begin(), where.end());
    CHECK(image.size() == lat.num_qbits());
}
