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

#include "channel.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

using namespace emschart;

namespace
{
    constexpr double kLambda = 0.01;

    CVector random_vector(Eigen::Index n, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g;
        CVector v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = Complex(g(rng), g(rng));
        return v;
    }

    CMatrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64 &rng)
    {
        CMatrix m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            m.col(j) = random_vector(r, rng);
        return m;
    }

    PhaseProfile profile_of(std::vector<double> phases)
    {
        PhaseProfile p;
        p.phases = std::move(phases);
        return p;
    }
} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("single unit-gain boresight path on single elements gives 1")
    {
        PathSet ps;
        Path p;
        p.gain = 1.0;
        p.departure = {0.0, 0.0};
        p.arrival = {kPi, 0.0};
        ps.paths.push_back(p);
        const CMatrix h = aggregate_narrowband(ps, point_array(Vec3(10, 0, 0)), point_array(Vec3::Zero()), kLambda);
        REQUIRE(h.rows() == 1);
        REQUIRE(h.cols() == 1);
        CHECK(std::abs(h(0, 0) - 1.0) < 1e-15);
    }

    TEST_CASE("empty path set gives zeros")
    {
        ArrayGeometry rx;
        rx.elements = {Vec3(0, 0, 0), Vec3(0, kLambda / 2, 0)};
        const CMatrix h = aggregate_narrowband(PathSet{}, rx, point_array(Vec3(5, 0, 0)), kLambda);
        CHECK(h.rows() == 2);
        CHECK(h.norm() == 0.0);
    }

    TEST_CASE("two paths on a 2-element receiver match the hand sum")
    {
        ArrayGeometry rx;
        rx.elements = {Vec3(0, 0, 0), Vec3(0, kLambda / 2, 0)};
        rx.boresight = Vec3::UnitX();
        rx.pattern_exponent = 2.0;
        const ArrayGeometry tx = point_array(Vec3(20, 3, 0));
        PathSet ps;
        Path a, b;
        a.gain = std::polar(1e-4, 0.3);
        a.arrival = {0.2, 0.0};
        a.departure = {kPi + 0.2, 0.0};
        b.gain = std::polar(5e-5, -1.1);
        b.arrival = {-0.5, 0.1};
        b.departure = {kPi - 0.4, -0.1};
        ps.paths = {a, b};
        const CMatrix h = aggregate_narrowband(ps, rx, tx, kLambda);
        const double k = kTwoPi / kLambda;
        for (int n = 0; n < 2; ++n)
        {
            Complex sum = 0.0;
            for (const Path *p : {&a, &b})
            {
                const double c = std::cos(p->arrival.elevation) * std::cos(p->arrival.azimuth); // cos of angle from +x
                const double rho = c * c;
                const double y = n * kLambda / 2;
                const double phase = k * std::cos(p->arrival.elevation) * std::sin(p->arrival.azimuth) * y;
                sum += p->gain * rho * std::polar(1.0, phase);
            }
            sum /= std::sqrt(2.0);
            CHECK(std::abs(h(n, 0) - sum) < 1e-15);
        }
    }

    TEST_CASE("single path aggregation is rank one")
    {
        ArrayGeometry rx;
        for (int n = 0; n < 4; ++n)
            rx.elements.emplace_back(0, n * kLambda / 2, 0);
        PathSet ps;
        Path p;
        p.gain = std::polar(1e-3, 0.7);
        p.arrival = {0.3, 0.05};
        p.departure = {kPi + 0.3, -0.05};
        ps.paths = {p};
        ArrayGeometry tx;
        tx.elements = {Vec3(10, 0, 0), Vec3(10, kLambda / 2, 0), Vec3(10, kLambda, 0)};
        tx.origin = tx.elements[0];
        const CMatrix h = aggregate_narrowband(ps, rx, tx, kLambda);
        Eigen::JacobiSVD<CMatrix> svd(h);
        const auto s = svd.singularValues();
        CHECK(s(0) > 0.0);
        CHECK(s(1) / s(0) < 1e-12);
    }

    TEST_CASE("ems_channel identities and elementwise oracle")
    {
        std::mt19937_64 rng(5);
        CMatrix Ho = random_matrix(3, 1, rng);
        CVector hi = random_vector(1, rng);
        CHECK((ems_channel(Ho, profile_of({0.0}), hi) - Ho * hi).norm() < 1e-15);
        CHECK(ems_channel(Ho, profile_of({1.0}), CVector::Zero(1)).norm() == 0.0);

        Ho = random_matrix(3, 2, rng);
        hi = random_vector(2, rng);
        const std::vector<double> phi{0.4, 2.9};
        CVector expect = CVector::Zero(3);
        for (int l = 0; l < 2; ++l)
            expect += Ho.col(l) * std::polar(1.0, phi[static_cast<std::size_t>(l)]) * hi(l);
        CHECK((ems_channel(Ho, profile_of(phi), hi) - expect).norm() < 1e-14);

        CHECK_THROWS_AS(ems_channel(Ho, profile_of({0.0}), hi), std::invalid_argument);
        CHECK_THROWS_AS(ems_channel(Ho, profile_of(phi), random_vector(3, rng)), std::invalid_argument);
    }

    TEST_CASE("global phase shift multiplies the EMS term by a unimodular factor")
    {
        std::mt19937_64 rng(9);
        const CMatrix Ho = random_matrix(4, 6, rng);
        const CVector hi = random_vector(6, rng);
        std::vector<double> phi(6), shifted(6);
        std::uniform_real_distribution<double> u(0.0, kTwoPi);
        const double c = 1.3;
        for (int l = 0; l < 6; ++l)
        {
            phi[static_cast<std::size_t>(l)] = u(rng);
            shifted[static_cast<std::size_t>(l)] = phi[static_cast<std::size_t>(l)] + c;
        }
        const CVector a = ems_channel(Ho, profile_of(phi), hi);
        const CVector b = ems_channel(Ho, profile_of(shifted), hi);
        CHECK((b - std::polar(1.0, c) * a).norm() < 1e-12 * a.norm());
        CHECK(std::abs(b.norm() / a.norm() - 1.0) < 1e-12);
    }

    TEST_CASE("composite channel sums independently computed terms")
    {
        std::mt19937_64 rng(21);
        LinkChannels links;
        links.direct = random_vector(4, rng);
        EmsConfiguration none;
        CHECK((composite_channel(links, none) - links.direct).norm() == 0.0);

        for (int j = 0; j < 2; ++j)
        {
            links.incident.push_back(random_vector(5, rng));
            links.outgoing.push_back(random_matrix(4, 5, rng));
        }
        std::uniform_real_distribution<double> u(0.0, kTwoPi);
        EmsConfiguration cfg;
        for (int j = 0; j < 2; ++j)
        {
            std::vector<double> phi(5);
            for (auto &x : phi)
                x = u(rng);
            cfg.panels.emplace_back(profile_of(phi));
        }
        const CVector t1 = ems_channel(links.outgoing[0], *cfg.panels[0], links.incident[0]);
        const CVector t2 = ems_channel(links.outgoing[1], *cfg.panels[1], links.incident[1]);
        CHECK((composite_channel(links, cfg) - (links.direct + t1 + t2)).norm() < 1e-14);

        // Panel order does not matter.
        LinkChannels swapped = links;
        std::swap(swapped.incident[0], swapped.incident[1]);
        std::swap(swapped.outgoing[0], swapped.outgoing[1]);
        EmsConfiguration cfg_swapped = cfg;
        std::swap(cfg_swapped.panels[0], cfg_swapped.panels[1]);
        CHECK((composite_channel(swapped, cfg_swapped) - composite_channel(links, cfg)).norm() < 1e-14);

        // Without a direct path a single panel contributes alone.
        LinkChannels only = links;
        only.direct.setZero();
        EmsConfiguration first = cfg;
        first.panels[1].reset();
        CHECK((composite_channel(only, first) - t1).norm() < 1e-15);
    }

    TEST_CASE("snr_db arithmetic with the default radio")
    {
        const RadioParams r;
        CVector h = CVector::Zero(2);
        h(0) = 1.0;
        CHECK(snr_db(h, r) == doctest::Approx(115.0).epsilon(1e-12));
        h(0) = std::sqrt(1e-10);
        CHECK(snr_db(h, r) == doctest::Approx(15.0).epsilon(1e-12));
        const double blocked = snr_db(CVector::Zero(2), r);
        CHECK(std::isinf(blocked));
        CHECK(blocked < 0.0);
    }

    TEST_CASE("noiseless covariance is the outer product")
    {
        RadioParams r;
        r.noise_power_dbm = -std::numeric_limits<double>::infinity();
        std::mt19937_64 rng(2);
        const CVector h = random_vector(4, rng);
        const CovarianceFeature f = estimate_covariance(h, r, 77, 3);
        CHECK(f.point_id == 3);
        CHECK((f.R - h * h.adjoint()).norm() == 0.0);
    }

    TEST_CASE("sample covariance is Hermitian PSD for any seed")
    {
        const RadioParams r;
        std::mt19937_64 rng(4);
        for (std::uint64_t seed = 0; seed < 20; ++seed)
        {
            const CVector h = 1e-6 * random_vector(8, rng);
            const CMatrix R = estimate_covariance(h, r, seed).R;
            CHECK((R - R.adjoint()).norm() <= 1e-12 * R.norm());
            Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * R.trace().real());
        }
    }

    TEST_CASE("sample covariance converges to h h^H + sigma^2 I")
    {
        RadioParams r;
        r.snapshots = 10000;
        std::mt19937_64 rng(8);
        const CVector h = 1e-6 * random_vector(4, rng);
        const double var = noise_variance(r);
        const CMatrix expect = h * h.adjoint() + var * CMatrix::Identity(4, 4);
        const CMatrix R = estimate_covariance(h, r, 12).R;
        CHECK((R - expect).norm() / expect.norm() < 0.05);
    }

    TEST_CASE("covariance estimation is deterministic per seed")
    {
        const RadioParams r;
        std::mt19937_64 rng(1);
        const CVector h = 1e-6 * random_vector(6, rng);
        CHECK(estimate_covariance(h, r, 5).R == estimate_covariance(h, r, 5).R);
        CHECK_FALSE(estimate_covariance(h, r, 5).R == estimate_covariance(h, r, 6).R);
    }
}
