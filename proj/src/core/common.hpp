// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The emschart Authors
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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace emschart
{
    using Complex = std::complex<double>;
    using Vec3 = Eigen::Vector3d;
    using Vec2 = Eigen::Vector2d;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    inline constexpr double kSpeedOfLight = 299792458.0; // m/s
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

    inline double dbm_to_watts(double dbm)
    {
        if (std::isinf(dbm) && dbm < 0.0)
            return 0.0;
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    inline double watts_to_dbm(double watts)
    {
        if (watts <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(watts) + 30.0;
    }

    // Phase wrapped into [0, 2pi).
    inline double wrap_phase(double phi)
    {
        double w = std::fmod(phi, kTwoPi);
        if (w < 0.0)
            w += kTwoPi;
        if (w >= kTwoPi) // fmod of a tiny negative value can round up to 2pi
            w = 0.0;
        return w;
    }

    // Seed mixing for per-item generators; splitmix64 finalizer.
    inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
    {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Deterministic random source. The std distributions are implementation
    /// defined, so uniform and Gaussian draws are derived here from the raw
    /// mt19937_64 stream, which the standard pins bit-for-bit.
    class Rng
    {
      public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        // Uniform on [0, 1) with 53 random bits.
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // Standard normal via Box-Muller; the second variate is cached.
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = 0.0;
            do
                u1 = uniform();
            while (u1 <= 0.0);
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            spare_ = r * std::sin(kTwoPi * u2);
            has_spare_ = true;
            return r * std::cos(kTwoPi * u2);
        }

        // Uniform integer in [0, n).
        std::uint64_t below(std::uint64_t n)
        {
            // Rejection sampling keeps the draw unbiased.
            const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
            std::uint64_t x = 0;
            do
                x = engine_();
            while (x >= limit);
            return x % n;
        }

      private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
} // namespace emschart
