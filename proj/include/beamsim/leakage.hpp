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

#pragma once

#include <armadillo>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamsim {

/// Fraction of a beamspace vector's power outside its strongest beam.
struct LeakageReport {
    double eta = 0.0;           // leaked fraction, in [0, 1]
    arma::uword peak_index = 0; // strongest beam; ties break toward the lowest index
    arma::vec per_beam_power;   // |hb_i|^2
};

/// Empirical leakage ratio of a beamspace channel vector: eta = 1 - max_i |hb_i|^2 / sum |hb_i|^2.
inline LeakageReport leakage_ratio(const arma::cx_vec &hb)
{
    if (hb.n_elem == 0)
        throw std::domain_error("leakage_ratio: empty vector");
    LeakageReport rep;
    rep.per_beam_power.set_size(hb.n_elem);
    double total = 0.0;
    double peak = -1.0;
    for (arma::uword i = 0; i < hb.n_elem; ++i) {
        const double p = std::norm(hb(i));
        rep.per_beam_power(i) = p;
        total += p;
        if (p > peak) { // strict: ties keep the lowest index
            peak = p;
            rep.peak_index = i;
        }
    }
    if (total <= 0.0)
        throw std::domain_error("leakage_ratio: zero beamspace vector");
    rep.eta = 1.0 - peak / total;
    return rep;
}

namespace detail {

/// sum_{i=1}^{M/2} sin^2(pi/2M) / sin^2((2i-1) pi / 2M) -- one dimension's worst-offset
/// folded sidelobe sum.
inline double worst_offset_sum(arma::uword m)
{
    const double num = std::pow(std::sin(std::numbers::pi / (2.0 * static_cast<double>(m))), 2);
    double s = 0.0;
    for (arma::uword i = 1; i <= m / 2; ++i) {
        const double den = std::pow(
            std::sin((2.0 * static_cast<double>(i) - 1.0) * std::numbers::pi /
                     (2.0 * static_cast<double>(m))),
            2);
        s += num / den;
    }
    return s;
}

} // namespace detail

/// Closed-form worst-case single-path leakage for a ULA with N even (path exactly halfway
/// between two grid directions).
inline double worst_case_leakage_ula(arma::uword n)
{
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("worst_case_leakage_ula: N must be even and >= 2");
    return 1.0 - 1.0 / (2.0 * detail::worst_offset_sum(n));
}

/// Closed-form worst-case single-path leakage for a UPA with N1, N2 even (half-cell offset in
/// both dimensions). Separable: equals 1 - (1 - eta_ULA(N1)) * (1 - eta_ULA(N2)).
inline double worst_case_leakage_upa(arma::uword n1, arma::uword n2)
{
    if (n1 < 2 || n1 % 2 != 0 || n2 < 2 || n2 % 2 != 0)
        throw std::invalid_argument("worst_case_leakage_upa: N1 and N2 must be even and >= 2");
    return 1.0 - 1.0 / (4.0 * detail::worst_offset_sum(n1) * detail::worst_offset_sum(n2));
}

} // namespace beamsim
