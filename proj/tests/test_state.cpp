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

#include <array>
#include <map>

#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "qlga/state.hpp"

using namespace qlga;
using oracle::MatrixXcd;
using oracle::VectorXcd;

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

VectorXcd as_vector(const DenseState &s) {
    VectorXcd v(static_cast<Eigen::Index>(s.amplitudes().size()));
    for (std::size_t k = 0; k < s.amplitudes().size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = s.amplitudes()[k];
    }
    return v;
}

DenseState from_vector(const VectorXcd &v, int n, Statistics stats) {
    DenseState s(static_cast<std::size_t>(n), stats);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        s.amplitudes()[static_cast<std::size_t>(k)] = v(k);
    }
    return s;
}

// Random number-conserving gate on modes (i, j) and its full Fock-space
// action, built from the second-quantized Hamiltonian
// H = sum h_ab c_a^dag c_b + V n_i n_j.
struct GateCase {
    Eigen::Matrix4cd gate;
    MatrixXcd full;
};

GateCase random_gate(std::mt19937_64 &rng, int n, int i, int j, bool fermion) {
    const MatrixXcd h = oracle::random_hermitian(rng, 2);
    const double v = oracle::gaussian(rng);
    const auto c = oracle::annihilators(n, fermion);
    const int modes[2] = {i, j};
    const auto dim = Eigen::Index{1} << n;
    MatrixXcd hf = MatrixXcd::Zero(dim, dim);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            hf += h(a, b) * c[modes[a]].adjoint() * c[modes[b]];
        }
    }
    hf += v * c[i].adjoint() * c[i] * c[j].adjoint() * c[j];

    // Two-mode restriction in {dd, ud, du, uu}, first letter mode i.
    Eigen::Matrix4cd h4 = Eigen::Matrix4cd::Zero();
    h4(1, 1) = h(0, 0);
    h4(1, 2) = h(0, 1);
    h4(2, 1) = h(1, 0);
    h4(2, 2) = h(1, 1);
    h4(3, 3) = h(0, 0) + h(1, 1) + v;
    return {oracle::expm_i(h4), oracle::expm_i(hf)};
}

} // namespace

TEST_CASE("statistics names") {
    CHECK(statistics_from_string("fermion") == Statistics::fermion);
    CHECK(statistics_from_string("hard-boson") == Statistics::hard_boson);
    CHECK(statistics_from_string("boson") == Statistics::hard_boson);
    CHECK_THROWS(statistics_from_string("anyon"));
}

TEST_CASE("two-q-bit gate validation") {
    CHECK_NOTHROW(TwoQbitGate::identity());
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(0, 0) = 2.0;
    CHECK_THROWS_AS(TwoQbitGate(m, true), StateError);
    Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
    x(0, 3) = x(3, 0) = x(1, 1) = x(2, 2) = 1.0;
    CHECK_NOTHROW(TwoQbitGate(x, false));
    CHECK_THROWS_AS(TwoQbitGate(x, true), StateError);
}

TEST_CASE("dense state starts in the vacuum and enforces its limit") {
    DenseState s(5);
    CHECK(s.amplitudes()[0] == cplx{1.0, 0.0});
    CHECK(norm(s) == doctest::Approx(1.0));
    CHECK(particle_number(s) == 0.0);
    CHECK_THROWS_AS(DenseState(25), StateError);
    CHECK_NOTHROW(DenseState(25, Statistics::hard_boson, 26));
}

TEST_CASE("sector ranks are a bijection onto colex order") {
    for (std::size_t n_q : {1u, 5u, 9u}) {
        for (std::size_t n = 0; n <= std::min<std::size_t>(n_q, 4); ++n) {
            SectorState s(n_q, n, Statistics::hard_boson);
            REQUIRE(s.size() == choose(n_q, n));
            std::vector<QbitIndex> prev;
            for (std::size_t r = 0; r < s.size(); ++r) {
                const auto c = s.configuration(r);
                CHECK(c.size() == n);
                CHECK(std::is_sorted(c.begin(), c.end()));
                CHECK(s.rank(c) == r);
                if (r > 0) {
                    // colex: compare from the largest element down.
                    CHECK(std::lexicographical_compare(prev.rbegin(), prev.rend(), c.rbegin(), c.rend()));
                }
                prev = c;
            }
        }
    }
    CHECK_THROWS_AS(SectorState(40, 20, Statistics::hard_boson), StateError);
    SectorState s(6, 2, Statistics::hard_boson);
    const std::array<QbitIndex, 2> bad{3, 3};
    CHECK_THROWS_AS(s.amplitude(bad), StateError);
}

TEST_CASE("basis construction") {
    const std::array<QbitIndex, 3> occ{4, 1, 2};
    const SectorState s = make_sector_basis(6, occ);
    CHECK(s.particles() == 3);
    const std::array<QbitIndex, 3> sorted{1, 2, 4};
    CHECK(s.amplitude(sorted) == cplx{1.0, 0.0});
    const DenseState d = make_dense_basis(6, occ);
    CHECK(d.amplitudes()[0b10110] == cplx{1.0, 0.0});
    const std::array<QbitIndex, 2> dup{1, 1};
    CHECK_THROWS_AS(make_sector_basis(6, dup), StateError);
    const std::array<QbitIndex, 1> out{6};
    CHECK_THROWS_AS(make_sector_basis(6, out), StateError);
}

TEST_CASE("gate application matches the second-quantized oracle") {
    std::mt19937_64 rng(11);
    const int n = 6;
    for (bool fermion : {false, true}) {
        const Statistics stats = fermion ? Statistics::fermion : Statistics::hard_boson;
        for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 4}, std::pair{5, 0}, std::pair{2, 5},
                            std::pair{4, 3}}) {
            CAPTURE(fermion);
            CAPTURE(i);
            CAPTURE(j);
            const GateCase g = random_gate(rng, n, i, j, fermion);
            const TwoQbitGate gate(g.gate, true);
            const VectorXcd psi = oracle::random_vector(rng, 1 << n);
            const VectorXcd expect = g.full * psi;

            DenseState dense = from_vector(psi, n, stats);
            dense.apply_gate(gate, static_cast<QbitIndex>(i), static_cast<QbitIndex>(j));
            CHECK((as_vector(dense) - expect).cwiseAbs().maxCoeff() < 1e-12);

            for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
                SectorState sector = dense_to_sector(from_vector(psi, n, stats), k, 1e300);
                sector.apply_gate(gate, static_cast<QbitIndex>(i), static_cast<QbitIndex>(j));
                const DenseState back = sector_to_dense(sector);
                // Compare the k-particle component of the oracle result.
                double worst = 0.0;
                for (Eigen::Index x = 0; x < expect.size(); ++x) {
                    const auto pc = static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(x)));
                    const cplx want = pc == k ? expect(x) : cplx{0.0, 0.0};
                    worst = std::max(worst, std::abs(back.amplitudes()[static_cast<std::size_t>(x)] - want));
                }
                CHECK(worst < 1e-12);
            }
        }
    }
}

TEST_CASE("non-conserving gates are rejected for fermions") {
    Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
    x(0, 3) = x(3, 0) = x(1, 1) = x(2, 2) = 1.0;
    const TwoQbitGate flip(x, false);
    DenseState boson(3);
    boson.apply_gate(flip, 0, 2);
    CHECK(boson.amplitudes()[0b101] == cplx{1.0, 0.0});
    DenseState fermion(3, Statistics::fermion);
    CHECK_THROWS_AS(fermion.apply_gate(flip, 0, 2), StateError);
    SectorState sector(3, 1, Statistics::hard_boson);
    CHECK_THROWS_AS(sector.apply_gate(flip, 0, 2), StateError);
}

TEST_CASE("contiguous block application matches the Kronecker embedding") {
    std::mt19937_64 rng(5);
    const int n = 6;
    const int first = 2;
    const int width = 3;
    const MatrixXcd u = oracle::random_unitary(rng, 1 << width);
    const VectorXcd psi = oracle::random_vector(rng, 1 << n);
    const MatrixXcd full = Eigen::kroneckerProduct(
        MatrixXcd::Identity(1 << (n - first - width), 1 << (n - first - width)),
        Eigen::kroneckerProduct(u, MatrixXcd::Identity(1 << first, 1 << first)).eval());
    DenseState dense = from_vector(psi, n, Statistics::hard_boson);
    dense.apply_block(first, width, u);
    CHECK((as_vector(dense) - full * psi).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(dense.apply_block(5, 3, u), StateError);
    CHECK_THROWS_AS(dense.apply_block(0, 3, MatrixXcd::Ones(8, 8)), StateError);
}

TEST_CASE("sector block application keeps number sectors") {
    std::mt19937_64 rng(6);
    const int n = 7;
    const int first = 3;
    const int width = 3;
    // Number-conserving block: direct sum of random unitaries per count.
    MatrixXcd u = MatrixXcd::Zero(8, 8);
    for (int count = 0; count <= 3; ++count) {
        std::vector<int> idx;
        for (int p = 0; p < 8; ++p) {
            if (std::popcount(static_cast<unsigned>(p)) == count) {
                idx.push_back(p);
            }
        }
        const MatrixXcd block = oracle::random_unitary(rng, static_cast<Eigen::Index>(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < idx.size(); ++c) {
                u(idx[r], idx[c]) = block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    for (Statistics stats : {Statistics::hard_boson, Statistics::fermion}) {
        const VectorXcd psi = oracle::random_vector(rng, 1 << n);
        DenseState dense = from_vector(psi, n, stats);
        dense.apply_block(first, width, u);
        for (std::size_t k = 0; k <= 4; ++k) {
            SectorState sector = dense_to_sector(from_vector(psi, n, stats), k, 1e300);
            sector.apply_block(first, width, u);
            const SectorState expect = dense_to_sector(dense, k, 1e300);
            double worst = 0.0;
            for (std::size_t r = 0; r < sector.size(); ++r) {
                worst = std::max(worst, std::abs(sector.amplitudes()[r] - expect.amplitudes()[r]));
            }
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("phase passes") {
    std::mt19937_64 rng(8);
    const int n = 5;
    const VectorXcd psi = oracle::random_vector(rng, 1 << n);
    const std::array<QbitIndex, 2> qb{1, 3};
    const auto phase = [](std::uint64_t p) { return std::exp(cplx{0.0, 0.3 * static_cast<double>(p)}); };
    DenseState dense = from_vector(psi, n, Statistics::fermion);
    dense.apply_phase(qb, phase);
    for (std::size_t x = 0; x < 32; ++x) {
        const std::uint64_t p = ((x >> 1) & 1u) | (((x >> 3) & 1u) << 1);
        CHECK(std::abs(dense.amplitudes()[x] - psi(static_cast<Eigen::Index>(x)) * phase(p)) < 1e-14);
    }
    SectorState sector = dense_to_sector(from_vector(psi, n, Statistics::fermion), 2, 1e300);
    sector.apply_phase(qb, phase);
    const SectorState expect = dense_to_sector(dense, 2, 1e300);
    for (std::size_t r = 0; r < sector.size(); ++r) {
        CHECK(std::abs(sector.amplitudes()[r] - expect.amplitudes()[r]) < 1e-14);
    }
    CHECK_THROWS_AS(dense.apply_phase(qb, [](std::uint64_t) { return cplx{2.0, 0.0}; }), StateError);

    const auto diag = [](std::span<const QbitIndex> occ) {
        double s = 0.0;
        for (QbitIndex q : occ) {
            s += q * q;
        }
        return std::exp(cplx{0.0, s});
    };
    DenseState d2 = from_vector(psi, n, Statistics::hard_boson);
    d2.apply_diagonal(diag);
    SectorState s2 = dense_to_sector(from_vector(psi, n, Statistics::hard_boson), 3, 1e300);
    s2.apply_diagonal(diag);
    const SectorState e2 = dense_to_sector(d2, 3, 1e300);
    for (std::size_t r = 0; r < s2.size(); ++r) {
        CHECK(std::abs(s2.amplitudes()[r] - e2.amplitudes()[r]) < 1e-14);
    }
}

TEST_CASE("dense and sector conversions") {
    std::mt19937_64 rng(3);
    SectorState s(8, 3, Statistics::fermion);
    for (auto &a : s.amplitudes()) {
        a = cplx{oracle::gaussian(rng), oracle::gaussian(rng)};
    }
    const DenseState d = sector_to_dense(s);
    CHECK(d.statistics() == Statistics::fermion);
    const SectorState back = dense_to_sector(d, 3);
    for (std::size_t r = 0; r < s.size(); ++r) {
        CHECK(back.amplitudes()[r] == s.amplitudes()[r]);
    }
    CHECK_THROWS_AS(dense_to_sector(d, 2), StateError);
    CHECK(std::abs(inner_product(s, s) - cplx{norm(s) * norm(s), 0.0}) < 1e-12);
    CHECK(norm(d) == doctest::Approx(norm(s)).epsilon(1e-14));
}

TEST_CASE("density profile and particle number") {
    SectorState s(4, 2, Statistics::hard_boson);
    const std::array<QbitIndex, 2> c01{0, 1};
    const std::array<QbitIndex, 2> c23{2, 3};
    s.set_amplitude(c01, std::sqrt(0.25));
    s.set_amplitude(c23, cplx{0.0, std::sqrt(0.75)});
    const auto rho = density_profile(s);
    CHECK(rho[0] == doctest::Approx(0.25));
    CHECK(rho[1] == doctest::Approx(0.25));
    CHECK(rho[2] == doctest::Approx(0.75));
    CHECK(rho[3] == doctest::Approx(0.75));
    const DenseState d = sector_to_dense(s);
    CHECK(particle_number(d) == doctest::Approx(2.0));
    const auto rho_d = density_profile(d);
    for (std::size_t q = 0; q < 4; ++q) {
        CHECK(rho_d[q] == doctest::Approx(rho[q]));
    }
}

TEST_CASE("sampling is seeded and follows the Born rule") {
    SectorState s(3, 1, Statistics::hard_boson);
    s.amplitudes()[0] = 0.5;
    s.amplitudes()[1] = cplx{0.0, 0.5};
    s.amplitudes()[2] = -std::sqrt(0.5);
    const auto a = sample_measurements(s, 42, 20000);
    const auto b = sample_measurements(s, 42, 20000);
    CHECK(a == b);
    CHECK(sample_measurements(s, 43, 100) != std::vector<Bitstring>(a.begin(), a.begin() + 100));
    std::map<Bitstring, int> counts;
    for (const auto &x : a) {
        ++counts[x];
    }
    CHECK(counts.size() == 3);
    CHECK(counts["001"] == doctest::Approx(20000 * 0.5).epsilon(0.05));
    CHECK(counts["100"] == doctest::Approx(20000 * 0.25).epsilon(0.05));

    const DenseState d = sector_to_dense(s);
    CHECK(sample_measurements(d, 42, 50) == sample_measurements(d, 42, 50));
    CHECK(sample_measurement(d, 9).size() == 3);

    SectorState bad(3, 1, Statistics::hard_boson);
    bad.amplitudes()[0] = 2.0;
    CHECK_THROWS_AS(sample_measurements(bad, 1, 1), StateError);
}
