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
#include <stdexcept>

#include "beamsim/precoders.hpp"

namespace beamsim {

/// Device power constants (watts) and the switch-count convention.
///
/// PER_BEAM counts one switch per RF chain (or per selected beam for MBMRF); FULL_CROSSBAR
/// gives every RF chain an N-way switch bank, which dominates the budget at large N.
struct PowerModel {
    enum class SwitchConvention { PerBeam, FullCrossbar };

    double p_ref = 0.020;
    double p_bb = 10 * 0.020;
    double p_rf = 12 * 0.020;
    double p_sw = 0.25 * 0.020;
    double p_ps = 1.5 * 0.020;
    double p_t = 25 * 0.020;
    SwitchConvention convention = SwitchConvention::FullCrossbar;

    static PowerModel from_reference(double p_ref_w,
                                     SwitchConvention conv = SwitchConvention::FullCrossbar)
    {
        PowerModel m;
        m.p_ref = p_ref_w;
        m.p_bb = 10.0 * p_ref_w;
        m.p_rf = 12.0 * p_ref_w;
        m.p_sw = 0.25 * p_ref_w;
        m.p_ps = 1.5 * p_ref_w;
        m.p_t = 25.0 * p_ref_w;
        m.convention = conv;
        return m;
    }

    void validate() const
    {
        if (!(p_ref > 0 && p_bb > 0 && p_rf > 0 && p_sw > 0 && p_ps > 0 && p_t > 0))
            throw std::invalid_argument("PowerModel: all powers must be positive");
    }
};

struct RateResult {
    arma::vec per_user_rate; // bit/s/Hz
    double sum_rate = 0.0;   // bit/s/Hz
    arma::vec sinr;          // linear
};

/// Thermal noise power in watts for a given bandwidth and PSD in dBm/Hz.
inline double noise_power(double bandwidth_hz, double psd_dbm_per_hz)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be positive");
    const double dbm = psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

/// Downlink sum-rate: SINR_k = |hbar_k^H p_bb^(k)|^2 / (sigma2 + sum_{i!=k} |hbar_k^H p_bb^(i)|^2)
/// with hbar = P_RF^H * hb the RF-user equivalent channel.
inline RateResult sum_rate(const arma::cx_mat &hb, const PrecoderPair &pair, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("sum_rate: sigma2 must be positive");
    const arma::uword k_users = hb.n_cols;
    if (pair.p_rf.n_rows != hb.n_rows || pair.p_bb.n_rows != pair.p_rf.n_cols ||
        pair.p_bb.n_cols != k_users)
        throw std::invalid_argument("sum_rate: dimension mismatch");

    // P_RF is the identity for the ideal scheme; skip the trivial product.
    const arma::cx_mat hbar = (pair.scheme == Scheme::IDEAL) ? hb : arma::cx_mat(pair.p_rf.t() * hb);
    const arma::cx_mat g = hbar.t() * pair.p_bb; // g(k, i) = hbar_k^H p_bb^(i)

    RateResult out;
    out.per_user_rate.set_size(k_users);
    out.sinr.set_size(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const double sig = std::norm(g(k, k));
        double intf = 0.0;
        for (arma::uword i = 0; i < k_users; ++i)
            if (i != k)
                intf += std::norm(g(k, i));
        out.sinr(k) = sig / (sigma2 + intf);
        out.per_user_rate(k) = std::log2(1.0 + out.sinr(k));
    }
    out.sum_rate = arma::accu(out.per_user_rate);
    return out;
}

/// Hardware power consumption of a scheme. B_T is the total selected beam count (ignored by
/// SB and IDEAL). The IDEAL reference is fully digital: P_T + P_BB + N * P_RF.
inline double power_consumption(Scheme scheme, arma::uword k_users, arma::uword n,
                                arma::uword b_total, const PowerModel &m)
{
    m.validate();
    if (k_users == 0 || n == 0)
        throw std::invalid_argument("power_consumption: counts must be positive");
    const double kd = static_cast<double>(k_users);
    const double nd = static_cast<double>(n);
    const double bd = static_cast<double>(b_total);
    const bool crossbar = m.convention == PowerModel::SwitchConvention::FullCrossbar;
    switch (scheme) {
    case Scheme::SB:
        return m.p_t + m.p_bb + kd * m.p_rf + (crossbar ? kd * nd : kd) * m.p_sw;
    case Scheme::MBMRF:
        return m.p_t + m.p_bb + bd * m.p_rf + (crossbar ? bd * nd : bd) * m.p_sw;
    case Scheme::BA:
        return m.p_t + m.p_bb + kd * m.p_rf + (crossbar ? kd * nd : kd) * m.p_sw + bd * m.p_ps;
    case Scheme::IDEAL:
        return m.p_t + m.p_bb + nd * m.p_rf;
    }
    throw std::invalid_argument("power_consumption: unknown scheme");
}

/// Energy efficiency in (bit/s/Hz)/W.
inline double energy_efficiency(const RateResult &rate, double power_w)
{
    if (!(power_w > 0.0))
        throw std::invalid_argument("energy_efficiency: power must be positive");
    return rate.sum_rate / power_w;
}

/// Bits-per-joule variant: bandwidth * sum_rate / power.
inline double energy_efficiency_bits_per_joule(const RateResult &rate, double power_w,
                                               double bandwidth_hz)
{
    if (!(power_w > 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument("energy_efficiency_bits_per_joule: invalid arguments");
    return bandwidth_hz * rate.sum_rate / power_w;
}

} // namespace beamsim
