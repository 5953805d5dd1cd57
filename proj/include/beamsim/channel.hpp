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
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "beamsim/arrays.hpp"
#include "beamsim/rng.hpp"

namespace beamsim {

/// One scattering cluster: path AoDs are uniform in [mean - spread/2, mean + spread/2]
/// per dimension (wrapped into the principal period).
struct ClusterSpec {
    SpatialDirection mean_aod;
    double spread_az = 0.0; // spatial-direction units
    double spread_el = 0.0; // UPA only
    arma::uword num_paths = 1;

    ClusterSpec() = default;
    ClusterSpec(SpatialDirection mean, double s_az, double s_el, arma::uword paths)
        : mean_aod(mean), spread_az(s_az), spread_el(s_el), num_paths(paths)
    {
        if (s_az < 0.0 || s_el < 0.0)
            throw std::invalid_argument("ClusterSpec: spread must be nonnegative");
        if (paths < 1)
            throw std::invalid_argument("ClusterSpec: num_paths must be positive");
    }
};

struct UserChannelParams {
    double mu = 1.0; // large-scale channel gain, linear scale
    std::vector<ClusterSpec> clusters;

    void validate() const
    {
        if (!(mu > 0.0))
            throw std::invalid_argument("UserChannelParams: mu must be positive");
        if (clusters.empty())
            throw std::invalid_argument("UserChannelParams: at least one cluster required");
    }
};

/// Spatial and beamspace channels of all K users, plus the generating parameters.
struct MultiuserChannel {
    ArrayGeometry geometry = ArrayGeometry::ula(2);
    arma::cx_mat h;  // N x K spatial
    arma::cx_mat hb; // N x K beamspace, hb = U * h
    std::vector<UserChannelParams> params;
    // Flat beam index of each user's first-cluster center when the scenario was generated
    // grid-aligned; empty otherwise.
    std::vector<arma::uword> grid_centers;

    arma::uword num_users() const { return h.n_cols; }
};

/// Linear-scale large-scale fading 10^(-PL/10) with PL(dB) = 72 + 29.2 log10(d) + shadow_db.
inline double large_scale_fading(double distance_m, double shadow_db)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("large_scale_fading: distance must be positive");
    const double pl_db = 72.0 + 29.2 * std::log10(distance_m) + shadow_db;
    return std::pow(10.0, -pl_db / 10.0);
}

/// Draw the cluster's path AoDs: num_paths i.i.d. uniform per dimension, wrapped into
/// [-1/2, 1/2). ULA consumes one uniform per path, UPA two (azimuth first).
inline std::vector<SpatialDirection> sample_cluster_aods(Rng &rng, const ClusterSpec &spec,
                                                         const ArrayGeometry &geometry)
{
    std::vector<SpatialDirection> aods;
    aods.reserve(spec.num_paths);
    for (arma::uword p = 0; p < spec.num_paths; ++p) {
        SpatialDirection d;
        d.az = wrap_direction(spec.mean_aod.az + spec.spread_az * (rng.uniform() - 0.5));
        if (geometry.is_upa())
            d.el = wrap_direction(spec.mean_aod.el + spec.spread_el * (rng.uniform() - 0.5));
        aods.push_back(d);
    }
    return aods;
}

namespace detail {

/// h += coeff * a(dir), with the steering phases generated incrementally.
inline void accumulate_steering(arma::cx_vec &h, const ArrayGeometry &g,
                                const SpatialDirection &dir, arma::cx_double coeff,
                                arma::cx_vec &scratch_az, arma::cx_vec &scratch_el)
{
    if (!g.is_upa()) {
        const arma::uword n = g.n1();
        const double u0 = -0.5 * static_cast<double>(n - 1);
        const double w = -2.0 * std::numbers::pi * dir.az;
        arma::cx_double v = std::polar(1.0 / std::sqrt(static_cast<double>(n)), w * u0);
        const arma::cx_double step = std::polar(1.0, w);
        for (arma::uword s = 0; s < n; ++s) {
            h(s) += coeff * v;
            v *= step;
        }
        return;
    }
    scratch_az = steering_1d(g.n1(), dir.az);
    scratch_el = steering_1d(g.n2(), dir.el);
    for (arma::uword ia = 0; ia < g.n1(); ++ia) {
        const arma::cx_double ca = coeff * scratch_az(ia);
        const arma::uword base = g.flat_index(ia, 0);
        for (arma::uword ie = 0; ie < g.n2(); ++ie)
            h(base + ie) += ca * scratch_el(ie);
    }
}

} // namespace detail

/// One user's spatial channel per the clustered Saleh-Valenzuela model:
/// h_k = sum_l sqrt(N mu / (N_cl N_p^(l))) sum_i beta a(phi), beta ~ CN(0,1).
/// Draw order per cluster: all path AoDs, then the path gains.
inline arma::cx_vec sample_user_channel(Rng &rng, const UserChannelParams &params,
                                        const ArrayGeometry &geometry)
{
    params.validate();
    const arma::uword n = geometry.size();
    arma::cx_vec h(n, arma::fill::zeros);
    arma::cx_vec scratch_az, scratch_el;
    const double n_cl = static_cast<double>(params.clusters.size());
    for (const ClusterSpec &cl : params.clusters) {
        const double pref = std::sqrt(static_cast<double>(n) * params.mu /
                                      (n_cl * static_cast<double>(cl.num_paths)));
        const auto aods = sample_cluster_aods(rng, cl, geometry);
        for (const SpatialDirection &aod : aods) {
            const arma::cx_double beta = rng.complex_gaussian();
            detail::accumulate_steering(h, geometry, aod, pref * beta, scratch_az, scratch_el);
        }
    }
    return h;
}

struct ShadowingConfig {
    bool enabled = true;
    double value = 8.7;           // dB^2 when value_is_variance, else dB
    bool value_is_variance = true;
};

struct ScenarioConfig {
    ArrayGeometry geometry = ArrayGeometry::ula(512);
    arma::uword num_users = 8;
    arma::uword num_clusters = 1;
    arma::uword num_paths = 10;
    // Cluster spread per dimension; defaults: ULA 10/N, UPA (2/N1, 2/N2).
    std::optional<double> spread_az;
    std::optional<double> spread_el;
    double distance_m = 10.0;
    ShadowingConfig shadowing;
    // Pairwise circular separation floor between user mean AoDs (azimuth); defaults:
    // ULA 4/N, UPA 4/N1.
    std::optional<double> min_separation;
    // Snap first-cluster means to the beam grid and spreads to whole grid cells, so cluster
    // endpoints land on integer grid indices.
    bool grid_align = false;
    std::optional<double> mu_override;

    double effective_spread_az() const
    {
        if (spread_az)
            return *spread_az;
        return geometry.is_upa() ? 2.0 / static_cast<double>(geometry.n1())
                                 : 10.0 / static_cast<double>(geometry.size());
    }
    double effective_spread_el() const
    {
        if (!geometry.is_upa())
            return 0.0;
        return spread_el ? *spread_el : 2.0 / static_cast<double>(geometry.n2());
    }
    double effective_min_separation() const
    {
        if (min_separation)
            return *min_separation;
        return 4.0 / static_cast<double>(geometry.n1());
    }
};

namespace detail {

inline double circular_distance(double a, double b)
{
    const double d = std::abs(wrap_direction(a - b));
    return std::min(d, 1.0 - d);
}

/// Nearest grid index (0-based) for a direction in one dimension of size m.
inline arma::uword snap_to_grid(double phi, arma::uword m)
{
    // phi_hat_i = (2i + 1 - m) / (2m), i = 0..m-1
    const double md = static_cast<double>(m);
    const double raw = std::round(phi * md + 0.5 * (md - 1.0));
    const auto idx = static_cast<long long>(raw);
    const long long wrapped = ((idx % static_cast<long long>(m)) + static_cast<long long>(m)) %
                              static_cast<long long>(m);
    return static_cast<arma::uword>(wrapped);
}

inline double grid_direction(arma::uword i, arma::uword m)
{
    return (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(m)) /
           (2.0 * static_cast<double>(m));
}

/// Largest stride <= K/2 coprime with K; cyclically adjacent ladder slots then map to
/// rungs at least stride/K apart.
inline arma::uword ladder_stride(arma::uword k_users)
{
    if (k_users < 4)
        return 1;
    for (arma::uword s = k_users / 2;; --s) {
        if (std::gcd(s, k_users) == 1)
            return s;
    }
}

/// Spread rounded to a whole (even) number of grid cells, at least 0.
inline double snap_spread(double spread, arma::uword m)
{
    const double cells = std::round(spread * static_cast<double>(m) / 2.0) * 2.0;
    return cells / static_cast<double>(m);
}

} // namespace detail

/// K users with first-cluster mean AoDs from a structured set: azimuths on an evenly spaced
/// circle (common random offset, per-user jitter bounded so the pairwise separation floor
/// holds); for UPA the elevations sit on a second evenly spaced ladder visited with a
/// coprime stride, so azimuth-adjacent users are far apart in elevation as well. Extra
/// clusters are uniform at random. Returns spatial and beamspace channels.
inline MultiuserChannel generate_scenario(Rng &rng, const ScenarioConfig &cfg,
                                          const LensTransform &lens)
{
    const ArrayGeometry &g = cfg.geometry;
    if (!(lens.geometry() == g))
        throw std::invalid_argument("generate_scenario: lens transform geometry mismatch");
    const arma::uword k_users = cfg.num_users;
    if (k_users < 1)
        throw std::invalid_argument("generate_scenario: K >= 1 required");
    const double min_sep = cfg.effective_min_separation();
    const double spacing = 1.0 / static_cast<double>(k_users);
    if (min_sep > spacing + 1e-12)
        throw std::invalid_argument(
            "generate_scenario: infeasible separation (K * min_separation > 1)");
    const double jitter_max = std::max(0.0, 0.5 * (spacing - min_sep));

    double spread_az = cfg.effective_spread_az();
    double spread_el = cfg.effective_spread_el();
    if (cfg.grid_align) {
        spread_az = detail::snap_spread(spread_az, g.n1());
        if (g.is_upa())
            spread_el = detail::snap_spread(spread_el, g.n2());
    }

    const double offset = rng.uniform();
    const double el_offset = g.is_upa() ? rng.uniform() : 0.0;
    const arma::uword el_stride = detail::ladder_stride(k_users);
    MultiuserChannel ch;
    ch.geometry = g;
    ch.params.resize(k_users);
    ch.h.set_size(g.size(), k_users);

    std::vector<double> az_means(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        UserChannelParams &up = ch.params[k];
        const double jitter = (rng.uniform() - 0.5) * 2.0 * jitter_max;
        double az = wrap_direction(offset + static_cast<double>(k) * spacing + jitter);
        double el = 0.0;
        if (g.is_upa()) {
            // Elevation ladder rung for this azimuth slot, jittered within a quarter rung.
            const double rung = static_cast<double>((k * el_stride) % k_users) * spacing;
            const double el_jitter = (rng.uniform() - 0.5) * 0.5 * spacing;
            el = wrap_direction(el_offset + rung + el_jitter);
        }

        double shadow_db = 0.0;
        if (cfg.shadowing.enabled) {
            const double sd = cfg.shadowing.value_is_variance ? std::sqrt(cfg.shadowing.value)
                                                              : cfg.shadowing.value;
            shadow_db = sd * rng.gaussian();
        }
        up.mu = cfg.mu_override ? *cfg.mu_override
                                : large_scale_fading(cfg.distance_m, shadow_db);

        if (cfg.grid_align) {
            const arma::uword ia = detail::snap_to_grid(az, g.n1());
            az = detail::grid_direction(ia, g.n1());
            arma::uword flat = ia;
            if (g.is_upa()) {
                const arma::uword ie = detail::snap_to_grid(el, g.n2());
                el = detail::grid_direction(ie, g.n2());
                flat = g.flat_index(ia, ie);
            }
            ch.grid_centers.push_back(flat);
        }
        az_means[k] = az;

        up.clusters.emplace_back(SpatialDirection(az, el), spread_az, spread_el, cfg.num_paths);
        for (arma::uword l = 1; l < cfg.num_clusters; ++l) {
            double caz = rng.uniform() - 0.5;
            double cel = g.is_upa() ? rng.uniform() - 0.5 : 0.0;
            if (cfg.grid_align) {
                caz = detail::grid_direction(detail::snap_to_grid(caz, g.n1()), g.n1());
                if (g.is_upa())
                    cel = detail::grid_direction(detail::snap_to_grid(cel, g.n2()), g.n2());
            }
            up.clusters.emplace_back(SpatialDirection(caz, cel), spread_az, spread_el,
                                     cfg.num_paths);
        }
    }

    // Construction guarantees the floor up to grid snapping (half a cell per user).
    const double slack = cfg.grid_align ? 1.0 / static_cast<double>(g.n1()) : 1e-12;
    if (k_users > 1) {
        for (arma::uword a = 0; a < k_users; ++a)
            for (arma::uword b = a + 1; b < k_users; ++b)
                if (detail::circular_distance(az_means[a], az_means[b]) < min_sep - slack)
                    throw std::logic_error("generate_scenario: separation floor violated");
    }

    for (arma::uword k = 0; k < k_users; ++k)
        ch.h.col(k) = sample_user_channel(rng, ch.params[k], g);
    ch.hb = lens.apply(ch.h);
    return ch;
}

inline MultiuserChannel generate_scenario(Rng &rng, const ScenarioConfig &cfg)
{
    const LensTransform lens(cfg.geometry);
    return generate_scenario(rng, cfg, lens);
}

} // namespace beamsim
