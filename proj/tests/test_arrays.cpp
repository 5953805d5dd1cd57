// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace MIMO precoding and power-leakage analysis for lens antenna arrays
// Copyright (C) 2026 beamsim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "beamsim/arrays.hpp"
#include "beamsim/rng.hpp"

using namespace beamsim;
using Catch::Matchers::WithinAbs;

TEST_CASE("grid directions: ULA values", "[arrays]")
{
    const auto d4 = grid_directions(4);
    REQUIRE(d4.size() == 4);
    CHECK_THAT(d4[0], WithinAbs(-0.375, 1e-15));
    CHECK_THAT(d4[1], WithinAbs(-0.125, 1e-15));
    CHECK_THAT(d4[2], WithinAbs(0.125, 1e-15));
    CHECK_THAT(d4[3], WithinAbs(0.375, 1e-15));

    const auto d2 = grid_directions(2);
    CHECK_THAT(d2[0], WithinAbs(-0.25, 1e-15));
    CHECK_THAT(d2[1], WithinAbs(0.25, 1e-15));
    CHECK_THAT(d2[0] + d2[1], WithinAbs(0.0, 1e-15)); // symmetric about 0
}

TEST_CASE("grid directions: UPA per-dimension, strictly increasing", "[arrays]")
{
    const auto g = ArrayGeometry::upa(4, 2);
    const auto d = grid_directions(g);
    REQUIRE(d.az.size() == 4);
    REQUIRE(d.el.size() == 2);
    CHECK_THAT(d.az.front(), WithinAbs(-0.375, 1e-15));
    CHECK_THAT(d.az.back(), WithinAbs(0.375, 1e-15));
    CHECK_THAT(d.el[0], WithinAbs(-0.25, 1e-15));
    CHECK_THAT(d.el[1], WithinAbs(0.25, 1e-15));
    for (std::size_t i = 1; i < d.az.size(); ++i)
        CHECK(d.az[i] > d.az[i - 1]);
}

TEST_CASE("element indices are centered half-integers", "[arrays]")
{
    const arma::vec idx = element_indices(4);
    CHECK_THAT(idx(0), WithinAbs(-1.5, 1e-15));
    CHECK_THAT(idx(3), WithinAbs(1.5, 1e-15));
    CHECK_THAT(arma::accu(idx), WithinAbs(0.0, 1e-15));
}

TEST_CASE("steering vector: zero direction and unit norm", "[arrays]")
{
    const auto g = ArrayGeometry::ula(16);
    const arma::cx_vec a0 = steering_vector(g, SpatialDirection(0.0));
    for (arma::uword i = 0; i < a0.n_elem; ++i) {
        CHECK_THAT(a0(i).real(), WithinAbs(0.25, 1e-14));
        CHECK_THAT(a0(i).imag(), WithinAbs(0.0, 1e-14));
    }

    Rng rng(42);
    for (int it = 0; it < 50; ++it) {
        const auto geom = (it % 2 == 0) ? ArrayGeometry::ula(2 + (it % 30))
                                        : ArrayGeometry::upa(2 + (it % 7), 2 + (it % 5));
        const SpatialDirection dir(rng.uniform(-0.5, 0.5),
                                   geom.is_upa() ? rng.uniform(-0.5, 0.5) : 0.0);
        CHECK_THAT(arma::norm(steering_vector(geom, dir)), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("steering vectors on the grid are orthonormal (N=256)", "[arrays]")
{
    const arma::uword n = 256;
    const auto g = ArrayGeometry::ula(n);
    const auto dirs = grid_directions(n);
    arma::cx_mat a(n, n);
    for (arma::uword i = 0; i < n; ++i)
        a.col(i) = steering_vector(g, SpatialDirection(dirs[i]));
    const arma::mat gram = arma::abs(a.t() * a);
    CHECK(arma::abs(gram - arma::eye(n, n)).max() < 1e-10);
}

TEST_CASE("lens transform is unitary", "[arrays]")
{
    for (const auto &g : {ArrayGeometry::ula(8), ArrayGeometry::ula(33),
                          ArrayGeometry::upa(4, 2), ArrayGeometry::upa(8, 8)}) {
        const LensTransform lens(g);
        const arma::uword n = g.size();
        const arma::cx_mat uu = lens.matrix() * lens.matrix().t();
        CHECK(arma::abs(uu - arma::eye<arma::cx_mat>(n, n)).max() < 1e-10);
    }
}

TEST_CASE("lens transform maps on-grid steering vectors to basis vectors", "[arrays]")
{
    const auto g = ArrayGeometry::ula(32);
    const LensTransform lens(g);
    const auto dirs = grid_directions(32);
    for (arma::uword i = 0; i < 32; i += 5) {
        const arma::cx_vec e = lens.apply(steering_vector(g, SpatialDirection(dirs[i])));
        arma::uword big = 0;
        for (arma::uword m = 0; m < e.n_elem; ++m) {
            if (std::abs(e(m)) >= 1.0 - 1e-9) {
                ++big;
                CHECK(m == i);
            } else {
                CHECK(std::abs(e(m)) < 1e-9);
            }
        }
        CHECK(big == 1);
    }
}

TEST_CASE("lens transform preserves norms (Parseval)", "[arrays]")
{
    Rng rng(7);
    const auto g = ArrayGeometry::ula(64);
    const LensTransform lens(g);
    for (int it = 0; it < 20; ++it) {
        arma::cx_vec h(64);
        for (auto &v : h)
            v = rng.complex_gaussian();
        CHECK_THAT(arma::norm(lens.apply(h)), WithinAbs(arma::norm(h), 1e-10));
    }
}

TEST_CASE("UPA: Kronecker order and flat-index round trip", "[arrays]")
{
    const auto g = ArrayGeometry::upa(4, 3);
    for (arma::uword ia = 0; ia < 4; ++ia)
        for (arma::uword ie = 0; ie < 3; ++ie) {
            const auto [ra, re] = g.axes_index(g.flat_index(ia, ie));
            CHECK(ra == ia);
            CHECK(re == ie);
        }

    // Lens transform row order matches the steering Kronecker order: a grid steering vector
    // (phi_az_i, phi_el_j) maps to basis vector at flat index i*N2 + j.
    const LensTransform lens(g);
    const auto d = grid_directions(g);
    const arma::uword ia = 2, ie = 1;
    const arma::cx_vec e =
        lens.apply(steering_vector(g, SpatialDirection(d.az[ia], d.el[ie])));
    const arma::uword flat = g.flat_index(ia, ie);
    for (arma::uword m = 0; m < e.n_elem; ++m) {
        if (m == flat)
            CHECK(std::abs(e(m)) >= 1.0 - 1e-9);
        else
            CHECK(std::abs(e(m)) < 1e-9);
    }
}

TEST_CASE("dirichlet kernel: peak, zeros, worst-offset value", "[arrays]")
{
    CHECK_THAT(dirichlet_kernel(7, 0.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(dirichlet_kernel(256, 0.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(dirichlet_kernel(256, 1.0 / 256.0), WithinAbs(0.0, 1e-12));
    // Half-cell offset: 1 / (M sin(pi / 2M)), about 2/pi for large M.
    const double expected = 1.0 / (256.0 * std::sin(std::numbers::pi / 512.0));
    CHECK_THAT(dirichlet_kernel(256, 1.0 / 512.0), WithinAbs(expected, 1e-14));
    CHECK_THAT(dirichlet_kernel(256, 1.0 / 512.0), WithinAbs(2.0 / std::numbers::pi, 1e-3));
}

TEST_CASE("dirichlet kernel: continuous extension at integers", "[arrays]")
{
    for (int k = -3; k <= 3; ++k) {
        // (-1)^(k (M-1))
        const double want_m4 = (k % 2 == 0) ? 1.0 : -1.0; // M=4: exponent parity = k
        CHECK_THAT(dirichlet_kernel(4, static_cast<double>(k)), WithinAbs(want_m4, 1e-15));
        CHECK_THAT(dirichlet_kernel(5, static_cast<double>(k)), WithinAbs(1.0, 1e-15)); // M odd
    }
    // Consistency with nearby evaluations.
    CHECK_THAT(dirichlet_kernel(4, 1.0 + 1e-9), WithinAbs(-1.0, 1e-6));
}

TEST_CASE("dirichlet kernel: bounded, even, periodic magnitude", "[arrays]")
{
    Rng rng(3);
    for (int it = 0; it < 300; ++it) {
        const arma::uword m = 1 + static_cast<arma::uword>(rng.uniform(0, 512));
        const double x = rng.uniform(-3.0, 3.0);
        const double v = dirichlet_kernel(m, x);
        CHECK(std::abs(v) <= 1.0 + 1e-12);
        CHECK_THAT(dirichlet_kernel(m, -x), WithinAbs(v, 1e-12));
        // Period 1 holds for the signed kernel when M is odd and for |kernel| always
        // (the signed kernel is antiperiodic for even M).
        if (m % 2 == 1)
            CHECK_THAT(dirichlet_kernel(m, x + 1.0), WithinAbs(v, 1e-12));
        CHECK_THAT(std::abs(dirichlet_kernel(m, x + 1.0)), WithinAbs(std::abs(v), 1e-12));
    }
}

TEST_CASE("spatial direction validates the principal range", "[arrays]")
{
    CHECK_NOTHROW(SpatialDirection(-0.5));
    CHECK_NOTHROW(SpatialDirection(0.4999));
    CHECK_THROWS_AS(SpatialDirection(0.5), std::invalid_argument);
    CHECK_THROWS_AS(SpatialDirection(-0.6), std::invalid_argument);
    CHECK_THROWS_AS(SpatialDirection(0.0, 0.75), std::invalid_argument);

    CHECK_THAT(wrap_direction(0.5), WithinAbs(-0.5, 1e-15));
    CHECK_THAT(wrap_direction(1.25), WithinAbs(0.25, 1e-15));
    CHECK_THAT(wrap_direction(-0.625), WithinAbs(0.375, 1e-15));
}

TEST_CASE("geometry validation", "[arrays]")
{
    CHECK_THROWS_AS(ArrayGeometry::ula(1), std::invalid_argument);
    CHECK_THROWS_AS(ArrayGeometry::upa(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(ArrayGeometry::upa(4, 1), std::invalid_argument);
    CHECK(ArrayGeometry::upa(4, 2).size() == 8);
}
