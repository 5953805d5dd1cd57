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
#include <vector>

#include "beamsim/arrays.hpp"
#include "beamsim/quadrature.hpp"

namespace beamsim {

/// Parameters of the analytical sum-rate bounds (ULA, grid-aligned clusters with integer
/// endpoint indices S0 < S1, one entry per user).
struct BoundParams {
    arma::uword n = 512;
    arma::uword k = 8;
    std::vector<long long> s0;
    std::vector<long long> s1;
    std::vector<arma::uword> beams; // B_k
    std::vector<double> mu;
    std::vector<arma::uword> n_cl;
    double p_t = 0.01;
    double sigma2 = 1e-12;

    void validate() const
    {
        if (k == 0 || s0.size() != k || s1.size() != k || beams.size() != k || mu.size() != k ||
            n_cl.size() != k)
            throw std::invalid_argument("BoundParams: per-user vectors must have K entries");
        if (!(p_t > 0.0) || !(sigma2 > 0.0))
            throw std::invalid_argument("BoundParams: powers must be positive");
        for (arma::uword i = 0; i < k; ++i) {
            if (s1[i] - s0[i] <= 2)
                throw std::invalid_argument("BoundParams: S1 - S0 > 2 required");
            if (beams[i] < 1 || n_cl[i] < 1 || !(mu[i] > 0.0))
                throw std::invalid_argument("BoundParams: invalid per-user entry");
        }
    }
};

enum class BoundMode { Exact, Approx };

namespace detail {

/// Integral of the squared Dirichlet kernel over [a, b], with the kernel zeros at multiples
/// of 1/N as mandatory breakpoints. The integrand here is dirichlet_kernel^2 <= 1; one full
/// period integrates to exactly 1/N.
inline double squared_kernel_integral(arma::uword n, double a, double b, double abs_tol)
{
    std::vector<double> zeros;
    const double nd = static_cast<double>(n);
    const long long lo = static_cast<long long>(std::ceil(a * nd));
    const long long hi = static_cast<long long>(std::floor(b * nd));
    for (long long z = lo; z <= hi; ++z)
        zeros.push_back(static_cast<double>(z) / nd);
    const auto f = [n](double x) {
        const double v = dirichlet_kernel(n, x);
        return v * v;
    };
    return integrate(f, a, b, abs_tol, zeros);
}

} // namespace detail

/// Per-component variance of beamspace element i for a grid-aligned cluster [S0, S1]
/// (unit large-scale gain, one cluster):
/// sigma^2_ki = (1 / (2 N (S1 - S0))) * Int_{(i-S1)/N}^{(i-S0)/N} sin^2(N pi X)/sin^2(pi X) dX,
/// evaluated by adaptive quadrature to absolute tolerance 1e-10.
inline double central_variance_exact(arma::uword n, long long s0, long long s1, long long i)
{
    if (s1 <= s0)
        throw std::domain_error("central_variance_exact: requires S1 > S0");
    const double nd = static_cast<double>(n);
    const double w = static_cast<double>(s1 - s0);
    const double a = (static_cast<double>(i) - static_cast<double>(s1)) / nd;
    const double b = (static_cast<double>(i) - static_cast<double>(s0)) / nd;
    // sin^2/sin^2 = N^2 * kernel^2; target 1e-10 on sigma^2 itself.
    const double tol = 1e-10 * 2.0 * w / nd;
    const double integral = detail::squared_kernel_integral(n, a, b, tol);
    return nd * integral / (2.0 * w);
}

/// Closed-form central-element approximation sigma^2 = 4 / (pi^2 (S1 - S0)).
inline double central_variance_approx(long long s0, long long s1)
{
    if (s1 <= s0)
        throw std::domain_error("central_variance_approx: requires S1 > S0");
    return 4.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(s1 - s0));
}

/// Fraction of the squared kernel's period energy inside the main lobe [-1/N, 1/N].
inline double kernel_concentration(arma::uword n)
{
    if (n < 4)
        throw std::invalid_argument("kernel_concentration: N >= 4 required");
    const double nd = static_cast<double>(n);
    const double tol = 1e-12 / nd;
    const double num = detail::squared_kernel_integral(n, -1.0 / nd, 1.0 / nd, tol);
    const double den = detail::squared_kernel_integral(n, -0.5, 0.5, tol);
    return num / den;
}

namespace detail {

inline double user_gamma(const BoundParams &p, arma::uword k)
{
    return p.p_t * static_cast<double>(p.n) * p.mu[k] /
           (static_cast<double>(p.k) * static_cast<double>(p.n_cl[k]));
}

inline double user_sigma2k(const BoundParams &p, arma::uword k, BoundMode mode)
{
    if (mode == BoundMode::Approx)
        return central_variance_approx(p.s0[k], p.s1[k]);
    const long long mid = (p.s0[k] + p.s1[k]) / 2; // most central element
    return central_variance_exact(p.n, p.s0[k], p.s1[k], mid);
}

} // namespace detail

/// Ergodic sum-rate upper bound for the beam-aligning precoder:
/// sum_k log2(1 + gamma sigma^2_k (pi B_k + 4 - pi) / (2 sigma^2)).
inline double ba_rate_bound(const BoundParams &p, BoundMode mode)
{
    p.validate();
    double r = 0.0;
    for (arma::uword k = 0; k < p.k; ++k) {
        const double gamma = detail::user_gamma(p, k);
        const double bk = static_cast<double>(p.beams[k]);
        const double s2k = detail::user_sigma2k(p, k, mode);
        r += std::log2(1.0 + gamma * s2k * (std::numbers::pi * bk + 4.0 - std::numbers::pi) /
                                 (2.0 * p.sigma2));
    }
    return r;
}

/// Ergodic sum-rate upper bound for MBMRF: sum_k log2(1 + 2 B_k gamma sigma^2_k / sigma^2).
inline double mbmrf_rate_bound(const BoundParams &p, BoundMode mode)
{
    p.validate();
    double r = 0.0;
    for (arma::uword k = 0; k < p.k; ++k) {
        const double gamma = detail::user_gamma(p, k);
        const double bk = static_cast<double>(p.beams[k]);
        const double s2k = detail::user_sigma2k(p, k, mode);
        r += std::log2(1.0 + 2.0 * bk * gamma * s2k / p.sigma2);
    }
    return r;
}

struct RateGap {
    double gap = 0.0; // MBMRF bound minus BA bound
    double cap = 0.0; // high-SNR analytic limit K * log2(4/pi)
};

inline RateGap rate_gap(const BoundParams &p, BoundMode mode)
{
    RateGap g;
    g.gap = mbmrf_rate_bound(p, mode) - ba_rate_bound(p, mode);
    g.cap = static_cast<double>(p.k) * std::log2(4.0 / std::numbers::pi);
    return g;
}

} // namespace beamsim
