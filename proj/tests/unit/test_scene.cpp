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

#include "scene.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace emschart;

namespace
{
    constexpr double kLambda = 0.01;

    ArrayGeometry iso(const Vec3 &p) { return point_array(p); }
} // namespace

TEST_SUITE("scene")
{
    TEST_CASE("wave_vector axis cases and a scratch evaluation")
    {
        const double k = kTwoPi / kLambda;
        Vec3 v = wave_vector({0.0, 0.0}, kLambda);
        CHECK(v.x() == doctest::Approx(k));
        CHECK(std::abs(v.y()) < 1e-9);
        CHECK(std::abs(v.z()) < 1e-9);

        v = wave_vector({kPi / 2, 0.0}, kLambda);
        CHECK(std::abs(v.x()) < 1e-9);
        CHECK(v.y() == doctest::Approx(k));

        // cos(pi/6) cos(pi/4) = 0.6123724356957945, sin(pi/6) = 0.5
        v = wave_vector({kPi / 4, kPi / 6}, kLambda);
        CHECK(v.x() == doctest::Approx(k * 0.6123724356957945).epsilon(1e-12));
        CHECK(v.y() == doctest::Approx(k * 0.6123724356957945).epsilon(1e-12));
        CHECK(v.z() == doctest::Approx(k * 0.5).epsilon(1e-12));

        CHECK_THROWS_AS(wave_vector({0.0, 0.0}, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(wave_vector({0.0, 0.0}, -1.0), std::invalid_argument);
    }

    TEST_CASE("wave_vector norm is 2 pi / lambda for random angles")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> az(-kPi, kPi), el(-kPi / 2, kPi / 2);
        for (int i = 0; i < 200; ++i)
        {
            const Vec3 v = wave_vector({az(rng), el(rng)}, kLambda);
            CHECK(std::abs(v.norm() / (kTwoPi / kLambda) - 1.0) < 1e-12);
        }
    }

    TEST_CASE("array_response examples")
    {
        const CVector a0 = array_response(iso(Vec3::Zero()), {0.3, 0.1}, kLambda);
        REQUIRE(a0.size() == 1);
        CHECK(std::abs(a0(0) - Complex(1.0, 0.0)) < 1e-15);

        ArrayGeometry pair;
        pair.elements = {Vec3(0, 0, 0), Vec3(kLambda / 2, 0, 0)};
        const CVector b = array_response(pair, {kPi / 2, 0.0}, kLambda);
        CHECK(std::abs(b(0) - 1.0) < 1e-12);
        CHECK(std::abs(b(1) - 1.0) < 1e-12);

        ArrayGeometry line;
        for (int n = 0; n < 4; ++n)
            line.elements.emplace_back(n * kLambda / 2, 0.0, 0.0);
        const CVector c = array_response(line, {0.0, 0.0}, kLambda);
        for (int n = 0; n < 4; ++n)
        {
            const Complex expect = std::polar(1.0, n * kPi);
            CHECK(std::abs(c(n) - expect) < 1e-12);
        }
    }

    TEST_CASE("array_response entries have unit modulus")
    {
        const ArrayGeometry g = planar_array(Vec3(1, 2, 3), Vec3(0, 1, 0), Vec3(0, 0, 1), 8, 4, kLambda / 2, kLambda / 2, 2.0);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> az(-kPi, kPi), el(-kPi / 2, kPi / 2);
        for (int i = 0; i < 50; ++i)
        {
            const CVector a = array_response(g, {az(rng), el(rng)}, kLambda);
            for (Eigen::Index n = 0; n < a.size(); ++n)
                CHECK(std::abs(std::abs(a(n)) - 1.0) < 1e-12);
        }
    }

    TEST_CASE("segment_blocked conventions")
    {
        const std::vector<BoxObstacle> boxes{{Vec3(0, 0, 0), Vec3(2, 2, 2)}};
        CHECK_FALSE(segment_blocked(Vec3(-1, 1, 3), Vec3(3, 1, 3), boxes));
        CHECK(segment_blocked(Vec3(-1, 1, 1), Vec3(3, 1, 1), boxes));
        CHECK_FALSE(segment_blocked(Vec3(-1, 0, 1), Vec3(3, 0, 1), boxes)); // along a face
        CHECK_FALSE(segment_blocked(Vec3(-1, 2, 2), Vec3(3, 2, 2), boxes)); // along an edge
        CHECK_FALSE(segment_blocked(Vec3(-1, 1, 1), Vec3(0, 1, 1), boxes)); // ends on a face
    }

    TEST_CASE("free-space path follows Friis")
    {
        Scene s;
        s.max_reflection_order = 1;
        const Vec3 tx(0, 0, 1.5), rx(30, 40, 1.5);
        const PathSet ps = trace_paths(s, tx, iso(rx));
        REQUIRE(ps.paths.size() == 1);
        const double d = 50.0;
        CHECK(ps.paths[0].length == doctest::Approx(d).epsilon(1e-12));
        CHECK(std::abs(ps.paths[0].gain) == doctest::Approx(s.wavelength() / (4 * kPi * d)).epsilon(1e-12));
        CHECK(ps.paths[0].delay * kSpeedOfLight == doctest::Approx(d).epsilon(1e-9));
        CHECK(ps.paths[0].bounces == 0);
    }

    TEST_CASE("tall box between tx and rx without reflectors blocks the link")
    {
        Scene s;
        s.max_reflection_order = 0;
        s.obstacles = {{Vec3(4, -5, 0), Vec3(6, 5, 50)}};
        CHECK(trace_paths(s, Vec3(0, 0, 1.5), iso(Vec3(10, 0, 1.5))).empty());
    }

    TEST_CASE("single reflecting wall matches the image-source construction")
    {
        Scene s;
        s.max_reflection_order = 1;
        s.reflection_coefficient = 0.5;
        // Wall face at y = 10, far too thin to block the direct path.
        s.obstacles = {{Vec3(-100, 10, 0), Vec3(100, 11, 30)}};
        const Vec3 tx(0, 0, 2), rx(20, 4, 2);
        const PathSet ps = trace_paths(s, tx, iso(rx));
        REQUIRE(ps.paths.size() == 2);
        const Path *direct = nullptr, *bounce = nullptr;
        for (const auto &p : ps.paths)
            (p.bounces == 0 ? direct : bounce) = &p;
        REQUIRE(direct);
        REQUIRE(bounce);
        // Image of tx across y = 10 is (0, 20, 2).
        const double expect = (Vec3(0, 20, 2) - rx).norm();
        CHECK(direct->length == doctest::Approx((rx - tx).norm()).epsilon(1e-12));
        CHECK(bounce->length == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::abs(bounce->gain) == doctest::Approx(0.5 * s.wavelength() / (4 * kPi * expect)).epsilon(1e-12));
    }

    TEST_CASE("path reciprocity and determinism")
    {
        Scene s;
        s.max_reflection_order = 2;
        s.obstacles = {{Vec3(-50, 10, 0), Vec3(50, 12, 20)}, {Vec3(-50, -12, 0), Vec3(50, -10, 20)}, {Vec3(20, -3, 0), Vec3(22, 3, 20)}};
        const Vec3 a(0, 2, 1.5), b(40, -4, 6.0);
        const PathSet ab = trace_paths(s, a, iso(b));
        const PathSet ba = trace_paths(s, b, iso(a));
        const PathSet ab2 = trace_paths(s, a, iso(b));
        REQUIRE(ab.paths.size() == ba.paths.size());
        REQUIRE(ab.paths.size() == ab2.paths.size());
        std::vector<double> la, lb;
        for (std::size_t i = 0; i < ab.paths.size(); ++i)
        {
            la.push_back(ab.paths[i].length);
            lb.push_back(ba.paths[i].length);
            CHECK(ab.paths[i].gain == ab2.paths[i].gain);
            CHECK(ab.paths[i].length == ab2.paths[i].length);
            CHECK(ab.paths[i].delay * kSpeedOfLight == doctest::Approx(ab.paths[i].length).epsilon(1e-9));
        }
        std::sort(la.begin(), la.end());
        std::sort(lb.begin(), lb.end());
        for (std::size_t i = 0; i < la.size(); ++i)
            CHECK(la[i] == doctest::Approx(lb[i]).epsilon(1e-12));
    }

    TEST_CASE("element pattern is cos^q in front and zero behind")
    {
        ArrayGeometry g = iso(Vec3::Zero());
        g.boresight = Vec3::UnitX();
        g.pattern_exponent = 2.0;
        CHECK(element_pattern(g, Vec3(1, 0, 0)) == doctest::Approx(1.0));
        CHECK(element_pattern(g, Vec3(1, 1, 0)) == doctest::Approx(0.5));
        CHECK(element_pattern(g, Vec3(-1, 0.2, 0)) == 0.0);
    }
}
