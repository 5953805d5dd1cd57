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

#include "beamsim/bounds.hpp"
#include "beamsim/channel.hpp"

using namespace beamsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("large-scale fading follows the path-loss law", "[channel]")
{
    // d = 10 m: PL = 72 + 29.2 = 101.2 dB.
    CHECK_THAT(large_scale_fading(10.0, 0.0), WithinRel(std::pow(10.0, -10.12), 1e-12));
    // d = 1 m: the log term vanishes.
    CHECK_THAT(-10.0 * std::log10(large_scale_fading(1.0, 0.0)), WithinAbs(72.0, 1e-12));
    // Shadowing adds in dB.
    CHECK_THAT(-10.0 * std::log10(large_scale_fading(10.0, 8.7)), WithinAbs(109.9, 1e-12));
    CHECK_THROWS_AS(large_scale_fading(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(large_scale_fading(-1.0, 0.0), std::domain_error);
}

TEST_CASE("cluster AoD sampling: degenerate, wrapped, uniform", "[channel]")
{
    const auto g = ArrayGeometry::ula(128);
    Rng rng(5);

    const ClusterSpec degenerate(SpatialDirection(0.2), 0.0, 0.0, 16);
    for (const auto &d : sample_cluster_aods(rng, degenerate, g))
        CHECK_THAT(d.az, WithinAbs(0.2, 1e-15));

    const ClusterSpec edge(SpatialDirection(0.499), 0.02, 0.0, 1000);
    for (const auto &d : sample_cluster_aods(rng, edge, g)) {
        CHECK(d.az >= -0.5);
        CHECK(d.az < 0.5);
    }

    const double spread = 10.0 / 128.0;
    const ClusterSpec wide(SpatialDirection(0.1), spread, 0.0, 100000);
    const auto aods = sample_cluster_aods(rng, wide, g);
    double lo = 1.0, hi = -1.0, sum = 0.0;
    for (const auto &d : aods) {
        lo = std::min(lo, d.az);
        hi = std::max(hi, d.az);
        sum += d.az;
    }
    CHECK(lo >= 0.1 - spread / 2.0 - 1e-12);
    CHECK(hi <= 0.1 + spread / 2.0 + 1e-12);
    // Mean within 3 sigma of the uniform law.
    const double se = spread / std::sqrt(12.0) / std::sqrt(1e5);
    CHECK_THAT(sum / 1e5, WithinAbs(0.1, 3.0 * se));
}

TEST_CASE("single-path user channel is a scaled steering vector", "[channel]")
{
    const auto g = ArrayGeometry::ula(32);
    Rng rng(11);
    UserChannelParams p;
    p.mu = 2.5;
    p.clusters.emplace_back(SpatialDirection(0.125), 0.0, 0.0, 1);
    const arma::cx_vec h = sample_user_channel(rng, p, g);
    const arma::cx_vec a = steering_vector(g, SpatialDirection(0.125));
    // h = sqrt(N mu) * beta * a for one CN(0,1) path gain beta.
    const arma::cx_double beta = h(0) / (a(0) * std::sqrt(32.0 * 2.5));
    for (arma::uword i = 0; i < h.n_elem; ++i)
        CHECK(std::abs(h(i) - std::sqrt(32.0 * 2.5) * beta * a(i)) < 1e-12);
}

TEST_CASE("channel energy normalization E||h||^2 = N mu", "[channel]")
{
    const auto g = ArrayGeometry::ula(16);
    Rng rng(17);
    UserChannelParams p;
    p.mu = 0.7;
    p.clusters.emplace_back(SpatialDirection(-0.1), 10.0 / 16.0, 0.0, 100);
    double acc = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const arma::cx_vec h = sample_user_channel(rng, p, g);
        acc += arma::dot(arma::abs(h), arma::abs(h));
    }
    CHECK_THAT(acc / trials, WithinRel(16.0 * 0.7, 0.02));
}

TEST_CASE("fixed seed gives bit-identical channels", "[channel]")
{
    const auto g = ArrayGeometry::upa(8, 4);
    UserChannelParams p;
    p.mu = 1.0;
    p.clusters.emplace_back(SpatialDirection(0.1, -0.2), 0.05, 0.05, 7);
    Rng r1(99), r2(99);
    const arma::cx_vec h1 = sample_user_channel(r1, p, g);
    const arma::cx_vec h2 = sample_user_channel(r2, p, g);
    for (arma::uword i = 0; i < h1.n_elem; ++i)
        CHECK(h1(i) == h2(i));
}

TEST_CASE("beamspace transform is norm preserving per user", "[channel]")
{
    Rng rng(23);
    for (int it = 0; it < 50; ++it) {
        ScenarioConfig cfg;
        cfg.geometry = (it % 2 == 0) ? ArrayGeometry::ula(16 + 8 * (it % 3))
                                     : ArrayGeometry::upa(4 + (it % 3), 4);
        cfg.num_users = 1 + (it % 4);
        cfg.num_paths = 1 + (it % 8);
        cfg.min_separation = 0.5 / static_cast<double>(cfg.num_users);
        const MultiuserChannel ch = generate_scenario(rng, cfg);
        for (arma::uword k = 0; k < ch.num_users(); ++k)
            CHECK_THAT(arma::norm(ch.hb.col(k)),
                       WithinAbs(arma::norm(ch.h.col(k)), 1e-9));
    }
}

TEST_CASE("central beamspace elements match the analytical variance", "[channel]")
{
    // Grid-aligned cluster; the per-component variance of a central element is
    // (N mu / N_cl) * sigma2_ki with sigma2_ki from quadrature.
    const arma::uword n = 64;
    const long long w = 8;
    const auto g = ArrayGeometry::ula(n);
    const LensTransform lens(g);
    const auto dirs = grid_directions(n);
    const arma::uword center = 30;

    UserChannelParams p;
    p.mu = 1.0;
    p.clusters.emplace_back(SpatialDirection(dirs[center]), static_cast<double>(w) / n, 0.0,
                            100);

    Rng rng(31);
    const int trials = 5000;
    double sr = 0, sr2 = 0, si = 0, si2 = 0;
    for (int t = 0; t < trials; ++t) {
        const arma::cx_vec hb = lens.apply(sample_user_channel(rng, p, g));
        const arma::cx_double v = hb(center);
        sr += v.real();
        sr2 += v.real() * v.real();
        si += v.imag();
        si2 += v.imag() * v.imag();
    }
    const double var_r = (sr2 - sr * sr / trials) / (trials - 1);
    const double var_i = (si2 - si * si / trials) / (trials - 1);
    const long long s0 = static_cast<long long>(center) - w / 2;
    const long long s1 = static_cast<long long>(center) + w / 2;
    const double want = static_cast<double>(n) *
                        central_variance_exact(n, s0, s1, static_cast<long long>(center));
    CHECK_THAT(var_r, WithinRel(want, 0.10));
    CHECK_THAT(var_i, WithinRel(want, 0.10));
}

TEST_CASE("scenario generation enforces user separation", "[channel]")
{
    ScenarioConfig cfg;
    cfg.geometry = ArrayGeometry::ula(512);
    cfg.num_users = 8;
    cfg.num_paths = 1;
    Rng rng(41);
    for (int it = 0; it < 20; ++it) {
        const MultiuserChannel ch = generate_scenario(rng, cfg);
        REQUIRE(ch.params.size() == 8);
        for (arma::uword a = 0; a < 8; ++a)
            for (arma::uword b = a + 1; b < 8; ++b) {
                const double d = std::abs(
                    wrap_direction(ch.params[a].clusters[0].mean_aod.az -
                                   ch.params[b].clusters[0].mean_aod.az));
                CHECK(std::min(d, 1.0 - d) >= 4.0 / 512.0 - 1e-12);
            }
    }

    // Single user: no separation constraint in play.
    cfg.num_users = 1;
    CHECK_NOTHROW(generate_scenario(rng, cfg));

    // Infeasible: K * min_separation > 1.
    cfg.num_users = 8;
    cfg.min_separation = 0.2;
    CHECK_THROWS_AS(generate_scenario(rng, cfg), std::invalid_argument);
}

TEST_CASE("LoS columns concentrate power on a few beams", "[channel]")
{
    ScenarioConfig cfg;
    cfg.geometry = ArrayGeometry::ula(64);
    cfg.num_users = 4;
    cfg.num_paths = 1;
    cfg.spread_az = 0.0;
    cfg.shadowing.enabled = false;
    Rng rng(47);
    const MultiuserChannel ch = generate_scenario(rng, cfg);
    const arma::uword top = 6; // ceil(log2(64))
    for (arma::uword k = 0; k < 4; ++k) {
        arma::vec power = arma::square(arma::abs(ch.hb.col(k)));
        const arma::vec sorted = arma::sort(power, "descend");
        const double frac =
            arma::accu(sorted.head(top)) / arma::accu(sorted);
        CHECK(frac >= 0.90);
    }
}

TEST_CASE("grid alignment snaps means and spreads to the beam grid", "[channel]")
{
    ScenarioConfig cfg;
    cfg.geometry = ArrayGeometry::ula(128);
    cfg.num_users = 4;
    cfg.num_paths = 3;
    cfg.grid_align = true;
    cfg.shadowing.enabled = false;
    Rng rng(53);
    const MultiuserChannel ch = generate_scenario(rng, cfg);
    REQUIRE(ch.grid_centers.size() == 4);
    const auto dirs = grid_directions(128);
    for (arma::uword k = 0; k < 4; ++k) {
        const auto &cl = ch.params[k].clusters[0];
        CHECK_THAT(cl.mean_aod.az, WithinAbs(dirs[ch.grid_centers[k]], 1e-12));
        // Spread snapped to an even number of whole cells.
        const double cells = cl.spread_az * 128.0;
        CHECK_THAT(cells, WithinAbs(std::round(cells / 2.0) * 2.0, 1e-9));
    }
}

TEST_CASE("deterministic scenarios for a fixed seed", "[channel]")
{
    ScenarioConfig cfg;
    cfg.geometry = ArrayGeometry::ula(32);
    cfg.num_users = 3;
    cfg.num_paths = 5;
    Rng r1(7), r2(7);
    const LensTransform lens(cfg.geometry);
    const MultiuserChannel a = generate_scenario(r1, cfg, lens);
    const MultiuserChannel b = generate_scenario(r2, cfg, lens);
    CHECK(arma::approx_equal(arma::abs(a.h - b.h), arma::zeros(32, 3), "absdiff", 0.0));
}
