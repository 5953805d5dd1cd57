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

#include "beamsim/metrics.hpp"
#include "beamsim/rng.hpp"

using namespace beamsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("noise power from PSD and bandwidth", "[metrics]")
{
    // 500 MHz at -174 dBm/Hz: about -87 dBm.
    const double s = noise_power(500e6, -174.0);
    CHECK_THAT(10.0 * std::log10(s * 1e3), WithinAbs(-87.0103, 1e-3));
    CHECK_THAT(s, WithinRel(1.9905e-12, 1e-3));
    // 1 Hz: identity bandwidth.
    CHECK_THAT(10.0 * std::log10(noise_power(1.0, -174.0) * 1e3), WithinAbs(-174.0, 1e-12));
    // Doubling bandwidth doubles the power (adds 3.01 dB).
    CHECK_THAT(noise_power(2e6, -170.0), WithinRel(2.0 * noise_power(1e6, -170.0), 1e-12));
    CHECK_THROWS_AS(noise_power(0.0, -174.0), std::invalid_argument);
}

TEST_CASE("sum rate: zero precoder, closed form, noise scaling", "[metrics]")
{
    Rng rng(7);
    arma::cx_mat hb(16, 1);
    for (auto &v : hb)
        v = rng.complex_gaussian();

    PrecoderPair zero;
    zero.scheme = Scheme::IDEAL;
    zero.p_rf = arma::cx_mat(16, 16, arma::fill::eye);
    zero.p_bb = arma::cx_mat(16, 1, arma::fill::zeros);
    CHECK(sum_rate(hb, zero, 1.0).sum_rate == 0.0);

    const auto ideal = ideal_precoder(hb, 0.4);
    const auto r1 = sum_rate(hb, ideal, 1e-3);
    const auto r10 = sum_rate(hb, ideal, 1e-2);
    CHECK_THAT(r1.sinr(0), WithinRel(10.0 * r10.sinr(0), 1e-12)); // exact for K = 1

    // K = 2 with interference: scaling noise by 10 divides the SINR by strictly less.
    arma::cx_mat hb2(16, 2);
    for (auto &v : hb2)
        v = rng.complex_gaussian();
    const auto id2 = ideal_precoder(hb2, 0.4);
    const auto a = sum_rate(hb2, id2, 1e-3);
    const auto b = sum_rate(hb2, id2, 1e-2);
    for (arma::uword k = 0; k < 2; ++k)
        CHECK(a.sinr(k) < 10.0 * b.sinr(k));

    // Dimension mismatch.
    PrecoderPair bad = ideal;
    bad.p_bb = arma::cx_mat(16, 2, arma::fill::zeros);
    CHECK_THROWS_AS(sum_rate(hb, bad, 1.0), std::invalid_argument);

    // RateResult invariants.
    const auto rr = sum_rate(hb2, id2, 1e-3);
    CHECK_THAT(rr.sum_rate, WithinRel(arma::accu(rr.per_user_rate), 1e-12));
    for (arma::uword k = 0; k < 2; ++k)
        CHECK_THAT(rr.per_user_rate(k), WithinRel(std::log2(1.0 + rr.sinr(k)), 1e-12));
}

TEST_CASE("power consumption models", "[metrics]")
{
    PowerModel m; // defaults: P_ref = 20 mW, full crossbar
    m.convention = PowerModel::SwitchConvention::PerBeam;

    // Verbatim per-beam models: K = 8 single-beam gives (25 + 10 + 96 + 2) P_ref = 2.66 W.
    CHECK_THAT(power_consumption(Scheme::SB, 8, 512, 8, m), WithinRel(133 * 0.020, 1e-12));
    // B_T = K: the PSN consumption exceeds SB by exactly K phase shifters.
    CHECK_THAT(power_consumption(Scheme::BA, 8, 512, 8, m),
               WithinRel(power_consumption(Scheme::SB, 8, 512, 8, m) + 8 * m.p_ps, 1e-12));

    // Full-crossbar convention at N=512, K=8, B~=5 (B_T=40): the reported 4.64 ratio.
    m.convention = PowerModel::SwitchConvention::FullCrossbar;
    const double p_mb = power_consumption(Scheme::MBMRF, 8, 512, 40, m);
    const double p_ba = power_consumption(Scheme::BA, 8, 512, 40, m);
    CHECK_THAT(p_mb, WithinRel(5635 * 0.020, 1e-12));
    CHECK_THAT(p_ba, WithinRel(1215 * 0.020, 1e-12));
    CHECK_THAT(p_mb / p_ba, WithinAbs(4.64, 0.02));

    CHECK_THROWS_AS(power_consumption(Scheme::SB, 0, 512, 8, m), std::invalid_argument);
}

TEST_CASE("rate grows with transmit power for a fixed assignment", "[metrics]")
{
    Rng rng(19);
    arma::cx_mat hb(24, 1);
    for (auto &v : hb)
        v = rng.complex_gaussian();
    const auto asgn = select_beams(ArrayGeometry::ula(24), hb, BaOptions{.fixed_beams = 3});
    double prev = -1.0;
    for (double p_t : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const auto rate = sum_rate(hb, ba_precoder_from_assignment(hb, asgn, p_t), 1e-3);
        CHECK(rate.sum_rate >= 0.0);
        CHECK(rate.sum_rate > prev);
        prev = rate.sum_rate;
    }
}

TEST_CASE("energy efficiency", "[metrics]")
{
    RateResult r;
    r.sum_rate = 0.0;
    CHECK(energy_efficiency(r, 2.0) == 0.0);
    r.sum_rate = 10.0;
    CHECK_THAT(energy_efficiency(r, 4.0), WithinRel(0.5 * energy_efficiency(r, 2.0), 1e-12));
    CHECK_THAT(energy_efficiency_bits_per_joule(r, 2.0, 500e6),
               WithinRel(500e6 * energy_efficiency(r, 2.0), 1e-12));
    CHECK_THROWS_AS(energy_efficiency(r, 0.0), std::invalid_argument);
}
