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
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace beamsim {

/// Uniform linear (N) or uniform planar (N1 x N2) array at half-wavelength spacing.
/// Element indices along a dimension of size M are centered: {s - (M-1)/2, s = 0..M-1}.
class ArrayGeometry {
  public:
    enum class Kind { ULA, UPA };

    static ArrayGeometry ula(arma::uword n)
    {
        if (n < 2)
            throw std::invalid_argument("ArrayGeometry: ULA requires N >= 2");
        return ArrayGeometry(Kind::ULA, n, 1);
    }

    static ArrayGeometry upa(arma::uword n1, arma::uword n2)
    {
        if (n1 < 2 || n2 < 2)
            throw std::invalid_argument("ArrayGeometry: UPA requires N1 >= 2 and N2 >= 2");
        return ArrayGeometry(Kind::UPA, n1, n2);
    }

    Kind kind() const { return kind_; }
    bool is_upa() const { return kind_ == Kind::UPA; }

    /// Total number of elements N (= N1*N2 for UPA).
    arma::uword size() const { return n1_ * n2_; }
    arma::uword n1() const { return n1_; }
    arma::uword n2() const { return n2_; }

    /// Beam (i_az, i_el) <-> flat index, row-major with azimuth as the outer axis.
    /// Matches the Kronecker order a_az (x) a_el.
    arma::uword flat_index(arma::uword i_az, arma::uword i_el) const { return i_az * n2_ + i_el; }
    std::pair<arma::uword, arma::uword> axes_index(arma::uword flat) const
    {
        return {flat / n2_, flat % n2_};
    }

    bool operator==(const ArrayGeometry &o) const
    {
        return kind_ == o.kind_ && n1_ == o.n1_ && n2_ == o.n2_;
    }

  private:
    ArrayGeometry(Kind k, arma::uword n1, arma::uword n2) : kind_(k), n1_(n1), n2_(n2) {}
    Kind kind_;
    arma::uword n1_, n2_;
};

/// Dimensionless spatial direction phi = (d/lambda)*sin(theta), d = lambda/2, so phi in [-1/2, 1/2).
/// ULA uses az only; UPA carries an azimuth/elevation pair.
struct SpatialDirection {
    double az = 0.0;
    double el = 0.0;

    SpatialDirection() = default;

    explicit SpatialDirection(double phi) : az(phi) { validate(phi); }

    SpatialDirection(double phi_az, double phi_el) : az(phi_az), el(phi_el)
    {
        validate(phi_az);
        validate(phi_el);
    }

  private:
    static void validate(double phi)
    {
        if (!(phi >= -0.5 && phi < 0.5))
            throw std::invalid_argument("SpatialDirection: value outside [-1/2, 1/2)");
    }
};

/// Wrap a direction into the principal period [-1/2, 1/2). Beamspace directions are
/// periodic with period 1 under the DFT grid.
inline double wrap_direction(double phi)
{
    double w = phi - std::floor(phi + 0.5);
    if (w >= 0.5) // guards the floor rounding edge
        w -= 1.0;
    return w;
}

/// Element indices I(M) = {s - (M-1)/2, s = 0..M-1} (half-integers when M is even).
inline arma::vec element_indices(arma::uword m)
{
    arma::vec idx(m);
    for (arma::uword s = 0; s < m; ++s)
        idx(s) = static_cast<double>(s) - 0.5 * static_cast<double>(m - 1);
    return idx;
}

/// Grid of orthogonal spatial directions for one dimension of size M:
/// phi_hat_i = (i - (M+1)/2)/M, i = 1..M, strictly increasing.
inline std::vector<double> grid_directions(arma::uword m)
{
    std::vector<double> dirs(m);
    for (arma::uword i = 0; i < m; ++i)
        dirs[i] = (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(m)) /
                  (2.0 * static_cast<double>(m));
    return dirs;
}

struct GridDirections {
    std::vector<double> az; // size N (ULA) or N1 (UPA)
    std::vector<double> el; // empty for ULA, size N2 for UPA
};

inline GridDirections grid_directions(const ArrayGeometry &g)
{
    GridDirections d;
    d.az = grid_directions(g.n1());
    if (g.is_upa())
        d.el = grid_directions(g.n2());
    return d;
}

namespace detail {

/// Steering factor for one dimension: (1/sqrt(M)) * exp(-j 2 pi phi u), u in I(M).
/// The phase ladder is generated incrementally (one exp, M-1 complex multiplies).
inline arma::cx_vec steering_1d(arma::uword m, double phi)
{
    arma::cx_vec a(m);
    const double u0 = -0.5 * static_cast<double>(m - 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    const double w = -2.0 * std::numbers::pi * phi;
    arma::cx_double v = std::polar(scale, w * u0);
    const arma::cx_double step = std::polar(1.0, w);
    for (arma::uword s = 0; s < m; ++s) {
        a(s) = v;
        v *= step;
    }
    return a;
}

} // namespace detail

/// Array steering vector; unit Euclidean norm. For UPA: a_az (x) a_el (azimuth outer).
inline arma::cx_vec steering_vector(const ArrayGeometry &g, const SpatialDirection &dir)
{
    if (!g.is_upa())
        return detail::steering_1d(g.n1(), dir.az);
    return arma::kron(detail::steering_1d(g.n1(), dir.az), detail::steering_1d(g.n2(), dir.el));
}

/// Dirichlet kernel sin(M pi x) / (M sin(pi x)), continuously extended: at integer x = k the
/// value is the limit (-1)^(k(M-1)). Even in x; |kernel| <= 1 and has period 1 (the signed
/// kernel itself is antiperiodic for even M).
inline double dirichlet_kernel(arma::uword m, double x)
{
    if (m < 1)
        throw std::invalid_argument("dirichlet_kernel: M >= 1 required");
    const double k = std::nearbyint(x);
    const double d = x - k;
    const auto ki = static_cast<std::int64_t>(k);
    const bool flip = (((ki % 2) + 2) % 2 == 1) && ((m - 1) % 2 == 1);
    const double sign = flip ? -1.0 : 1.0;
    if (d == 0.0)
        return sign;
    const double md = static_cast<double>(m);
    return sign * std::sin(md * std::numbers::pi * d) / (md * std::sin(std::numbers::pi * d));
}

/// The unitary lens (spatial DFT) transform: row i is a(phi_hat_i)^H. For UPA the matrix is
/// the Kronecker product of the per-dimension transforms, consistent with the steering order.
class LensTransform {
  public:
    explicit LensTransform(const ArrayGeometry &g) : geometry_(g)
    {
        if (!g.is_upa()) {
            u_ = build_1d(g.n1());
        } else {
            u_ = arma::kron(build_1d(g.n1()), build_1d(g.n2()));
        }
    }

    const ArrayGeometry &geometry() const { return geometry_; }
    const arma::cx_mat &matrix() const { return u_; }

    arma::cx_vec apply(const arma::cx_vec &h) const { return u_ * h; }
    arma::cx_mat apply(const arma::cx_mat &h) const { return u_ * h; }

  private:
    static arma::cx_mat build_1d(arma::uword m)
    {
        arma::cx_mat u(m, m);
        const auto dirs = grid_directions(m);
        for (arma::uword i = 0; i < m; ++i)
            u.row(i) = detail::steering_1d(m, dirs[i]).t(); // conjugate transpose
        return u;
    }

    ArrayGeometry geometry_;
    arma::cx_mat u_;
};

inline LensTransform lens_transform(const ArrayGeometry &g) { return LensTransform(g); }

} // namespace beamsim
