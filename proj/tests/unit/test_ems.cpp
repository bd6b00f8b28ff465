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

#include "ems.hpp"

#include <doctest.h>

#include <cmath>

using namespace emschart;

namespace
{
    constexpr double kLambda = 0.01;

    ArrayGeometry table_panel(int cols = 60, int rows = 60)
    {
        return planar_array(Vec3(0, 0, 5), Vec3(0, 1, 0), Vec3(0, 0, 1), cols, rows, kLambda / 4, kLambda / 4, 2.0);
    }

    double phase_distance(double a, double b)
    {
        const double d = std::fmod(std::abs(a - b), kTwoPi);
        return std::min(d, kTwoPi - d);
    }
} // namespace

TEST_SUITE("ems")
{
    TEST_CASE("zero-offset gradient is the specular mirror")
    {
        const auto panel = table_panel(6, 4);
        const PhaseProfile p = gradient_profile(panel, 2, 5, 0.75);
        for (double phi : p.phases)
            CHECK(phi == doctest::Approx(0.75));
    }

    TEST_CASE("offset one on 60 columns increments by 2 pi / 60 per column")
    {
        const auto panel = table_panel();
        const int K = 11;
        const PhaseProfile p = gradient_profile(panel, 6, K, 0.0); // s = 6 - 5 = 1
        const auto &layout = *panel.layout;
        for (std::size_t l = 0; l + 1 < p.size(); ++l)
        {
            if ((l + 1) % static_cast<std::size_t>(layout.cols) == 0)
                continue;
            CHECK(phase_distance(p.phases[l + 1] - p.phases[l], kTwoPi / 60.0) < 1e-12);
        }
        // Rows repeat: the gradient is horizontal only.
        CHECK(p.phases[7] == p.phases[60 + 7]);
    }

    TEST_CASE("gradient slope index errors")
    {
        const auto panel = table_panel(6, 4);
        CHECK_THROWS_AS(gradient_profile(panel, 11, 11), std::invalid_argument);
        CHECK_THROWS_AS(gradient_profile(panel, -1, 11), std::invalid_argument);
        CHECK_THROWS_AS(gradient_profile(panel, 0, 4), std::invalid_argument);
    }

    TEST_CASE("codebook of 11 holds offsets -5..5 and the specular codeword")
    {
        const auto panel = table_panel();
        const Codebook cb = build_codebook(panel, 11);
        REQUIRE(cb.size() == 11);
        for (int a = 0; a < 11; ++a)
            CHECK(cb.profiles[static_cast<std::size_t>(a)].label.slope_x == a - 5);
        CHECK(cb.specular_index() == 5);
        for (double phi : cb.profiles[5].phases)
            CHECK(phi == 0.0);

        const Codebook one = build_codebook(panel, 1);
        REQUIRE(one.size() == 1);
        CHECK(one.specular_index() == 0);

        CHECK_THROWS_AS(build_codebook(panel, 4), std::invalid_argument);
        CHECK_THROWS_AS(build_codebook(panel, 0), std::invalid_argument);
    }

    TEST_CASE("distinct codewords are orthogonal on 60 columns")
    {
        const auto panel = table_panel();
        const Codebook cb = build_codebook(panel, 11);
        const double L = static_cast<double>(panel.size());
        for (std::size_t a = 0; a < cb.size(); ++a)
            for (std::size_t b = a + 1; b < cb.size(); ++b)
            {
                Complex ip = 0.0;
                for (std::size_t l = 0; l < panel.size(); ++l)
                    ip += std::polar(1.0, cb.profiles[b].phases[l] - cb.profiles[a].phases[l]);
                CHECK(std::abs(ip) / L <= 1e-10);
            }
    }

    TEST_CASE("snell profile: pass-through and normal reflection are constant")
    {
        const auto panel = table_panel(8, 8);
        const AnglesPair a{0.4, 0.2};
        const PhaseProfile same = snell_profile(panel, a, a, kLambda, 1.25);
        for (double phi : same.phases)
            CHECK(phi == doctest::Approx(1.25).epsilon(1e-12));

        // Panel normal is +x: arrive along -x, leave along +x.
        const PhaseProfile normal = snell_profile(panel, {kPi, 0.0}, {0.0, 0.0}, kLambda, 0.0);
        for (double phi : normal.phases)
            CHECK(phase_distance(phi, normal.phases[0]) < 1e-9);
    }

    TEST_CASE("snell profile 30 to 45 degrees on a 4-element line")
    {
        ArrayGeometry line;
        for (int n = 0; n < 4; ++n)
            line.elements.emplace_back(0.0, n * kLambda / 4, 0.0);
        line.origin = Vec3::Zero();
        // Wave travelling into the wall at 30 deg from its normal (-x), reflected out at 45 deg.
        const double ti = kPi / 6, to = kPi / 4;
        const AnglesPair in{kPi - ti, 0.0}, out{to, 0.0};
        const PhaseProfile p = snell_profile(line, in, out, kLambda);
        const double k = kTwoPi / kLambda;
        for (int n = 0; n < 4; ++n)
        {
            const double y = n * kLambda / 4;
            // Tangential (y) parts: k_i,y = k sin(ti), k_o,y = k sin(to); phase = (k_i - k_o)_y y.
            const double hand = k * (std::sin(ti) - std::sin(to)) * y;
            CHECK(phase_distance(p.phases[static_cast<std::size_t>(n)], hand) < 1e-9);
        }
    }

    TEST_CASE("snell profile co-phases incident and outgoing plane waves")
    {
        const auto panel = table_panel(16, 16);
        const AnglesPair in{2.5, -0.3}, out{-0.6, 0.1};
        const PhaseProfile p = snell_profile(panel, in, out, kLambda);
        const Vec3 ki = wave_vector(in, kLambda), ko = wave_vector(out, kLambda);
        Complex sum = 0.0;
        for (std::size_t l = 0; l < panel.size(); ++l)
        {
            const Vec3 r = panel.elements[l] - panel.origin;
            sum += std::polar(1.0, -ki.dot(r) + p.phases[l] + ko.dot(r));
        }
        CHECK(std::abs(sum) == doctest::Approx(static_cast<double>(panel.size())).epsilon(1e-9));
    }

    TEST_CASE("gradient zero equals snell pass-through")
    {
        const auto panel = table_panel(10, 3);
        const PhaseProfile g = gradient_profile(panel, 1, 3, 0.0);
        const PhaseProfile s = snell_profile(panel, {0.3, 0.0}, {0.3, 0.0}, kLambda, 0.0);
        for (std::size_t l = 0; l < panel.size(); ++l)
            CHECK(phase_distance(g.phases[l], s.phases[l]) < 1e-12);
    }

    TEST_CASE("random profiles: determinism, seed sensitivity, flat spectrum")
    {
        const auto panel = table_panel();
        const PhaseProfile a = random_profile(panel, 0), b = random_profile(panel, 0), c = random_profile(panel, 1);
        CHECK(a == b);
        CHECK_FALSE(a == c);
        Complex m = 0.0;
        for (double phi : a.phases)
        {
            CHECK(phi >= 0.0);
            CHECK(phi < kTwoPi);
            m += std::polar(1.0, phi);
        }
        CHECK(std::abs(m) / static_cast<double>(a.size()) < 0.1);
    }

    TEST_CASE("stored phases stay in [0, 2 pi)")
    {
        const auto panel = table_panel(20, 5);
        for (int a = 0; a < 11; ++a)
            for (double phi : gradient_profile(panel, a, 11, -7.0).phases)
            {
                CHECK(phi >= 0.0);
                CHECK(phi < kTwoPi);
            }
    }
}
