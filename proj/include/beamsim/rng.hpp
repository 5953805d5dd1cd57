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
#include <random>
#include <utility>

namespace beamsim {

/// Identifier recorded in output metadata so runs can be replicated elsewhere.
inline constexpr const char *kRngAlgorithmId = "mt19937_64/boxmuller/v1";

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stream seed for (master seed, sweep index, trial index); collision-free in practice and
/// independent of execution order, so concurrent trials are reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (a * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
    h = splitmix64(h ^ (b * 0xBF58476D1CE4E5B9ULL + 0x2545F4914F6CDD1DULL));
    return h;
}

/// Deterministic random stream: mt19937_64 uniforms, Box-Muller normals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Two independent N(0,1) samples (Box-Muller; u1 shifted into (0,1]).
    std::pair<double, double> gaussian_pair()
    {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// One N(0,1) sample. Always consumes a full Box-Muller pair.
    double gaussian() { return gaussian_pair().first; }

    /// CN(0,1): unit total variance, i.i.d. real/imaginary parts.
    arma::cx_double complex_gaussian()
    {
        const auto [a, b] = gaussian_pair();
        return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace beamsim
