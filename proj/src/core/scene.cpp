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
#include "hashing.hpp"

#include <algorithm>
#include <stdexcept>

namespace emschart
{
    AnglesPair angles_of(const Vec3 &direction)
    {
        const double n = direction.norm();
        if (!(n > 0.0))
            throw std::invalid_argument("angles_of: zero direction");
        double az = std::atan2(direction.y(), direction.x());
        if (az >= kPi)
            az = -kPi;
        const double el = std::asin(std::clamp(direction.z() / n, -1.0, 1.0));
        return {az, el};
    }

    Vec3 unit_vector(const AnglesPair &angles)
    {
        const double ce = std::cos(angles.elevation);
        return {ce * std::cos(angles.azimuth), ce * std::sin(angles.azimuth), std::sin(angles.elevation)};
    }

    Vec3 wave_vector(const AnglesPair &angles, double wavelength)
    {
        if (!(wavelength > 0.0))
            throw std::invalid_argument("wave_vector: wavelength must be positive");
        return (kTwoPi / wavelength) * unit_vector(angles);
    }

    ArrayGeometry point_array(const Vec3 &position)
    {
        ArrayGeometry g;
        g.elements = {position};
        g.origin = position;
        g.pattern_exponent = 0.0;
        return g;
    }

    ArrayGeometry planar_array(const Vec3 &center, const Vec3 &horizontal_axis, const Vec3 &vertical_axis, int cols, int rows,
                               double dx, double dy, double pattern_exponent)
    {
        if (cols < 1 || rows < 1)
            throw std::invalid_argument("planar_array: grid needs at least one row and column");
        const Vec3 h = horizontal_axis.normalized();
        const Vec3 v = vertical_axis.normalized();

        ArrayGeometry g;
        g.origin = center;
        g.boresight = h.cross(v).normalized();
        g.pattern_exponent = pattern_exponent;
        g.elements.reserve(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
            {
                const double oc = (c - 0.5 * (cols - 1)) * dx;
                const double orow = (r - 0.5 * (rows - 1)) * dy;
                g.elements.push_back(center + oc * h + orow * v);
            }
        g.layout = PlanarLayout{cols, rows, dx, dy, h, v};
        return g;
    }

    void validate(const ArrayGeometry &geom)
    {
        if (geom.elements.empty())
            throw std::invalid_argument("array geometry has no elements");
        if (geom.pattern_exponent < 0.0)
            throw std::invalid_argument("array geometry: negative pattern exponent");
        for (const auto &p : geom.elements)
            if (!p.allFinite())
                throw std::invalid_argument("array geometry: non-finite element position");
        // Grids are distinct by construction; only check free-form arrays.
        if (!geom.layout && geom.elements.size() < 4096)
            for (std::size_t i = 0; i < geom.elements.size(); ++i)
                for (std::size_t j = i + 1; j < geom.elements.size(); ++j)
                    if (geom.elements[i] == geom.elements[j])
                        throw std::invalid_argument("array geometry: repeated element position");
    }

    CVector array_response(const ArrayGeometry &geom, const AnglesPair &angles, double wavelength)
    {
        if (geom.elements.empty())
            throw std::invalid_argument("array_response: empty geometry");
        const Vec3 k = wave_vector(angles, wavelength);
        CVector a(static_cast<Eigen::Index>(geom.size()));
        for (std::size_t n = 0; n < geom.size(); ++n)
        {
            const double phase = k.dot(geom.elements[n] - geom.origin);
            a[static_cast<Eigen::Index>(n)] = Complex(std::cos(phase), std::sin(phase));
        }
        return a;
    }

    double element_pattern(const ArrayGeometry &geom, const Vec3 &direction)
    {
        if (geom.pattern_exponent == 0.0)
            return 1.0;
        const double c = geom.boresight.dot(direction.normalized());
        if (c <= 0.0)
            return 0.0;
        return std::pow(c, geom.pattern_exponent);
    }

    void validate(const BoxObstacle &box)
    {
        if (!box.min_corner.allFinite() || !box.max_corner.allFinite())
            throw std::invalid_argument("obstacle: non-finite corner");
        if (!(box.min_corner.array() < box.max_corner.array()).all())
            throw std::invalid_argument("obstacle: min_corner must be below max_corner on every axis");
    }

    namespace
    {
        constexpr double kSlabEps = 1e-12;

        bool segment_hits_box(const Vec3 &a, const Vec3 &b, const BoxObstacle &box)
        {
            const Vec3 d = b - a;
            double enter = 0.0;
            double exit = 1.0;
            for (int ax = 0; ax < 3; ++ax)
            {
                const double lo = box.min_corner[ax];
                const double hi = box.max_corner[ax];
                if (std::abs(d[ax]) < 1e-15)
                {
                    // Parallel to the slab: must lie strictly between the planes.
                    if (!(a[ax] > lo && a[ax] < hi))
                        return false;
                    continue;
                }
                double t0 = (lo - a[ax]) / d[ax];
                double t1 = (hi - a[ax]) / d[ax];
                if (t0 > t1)
                    std::swap(t0, t1);
                enter = std::max(enter, t0);
                exit = std::min(exit, t1);
                if (exit - enter <= kSlabEps)
                    return false;
            }
            return exit - enter > kSlabEps;
        }

        struct Face
        {
            int axis;
            double coordinate;
            double outward; // +1 for the max face, -1 for the min face
            const BoxObstacle *box;
        };

        std::vector<Face> collect_faces(const std::vector<BoxObstacle> &obstacles)
        {
            std::vector<Face> faces;
            faces.reserve(obstacles.size() * 6);
            for (const auto &box : obstacles)
                for (int ax = 0; ax < 3; ++ax)
                {
                    faces.push_back({ax, box.min_corner[ax], -1.0, &box});
                    faces.push_back({ax, box.max_corner[ax], +1.0, &box});
                }
            return faces;
        }

        Vec3 mirror(const Vec3 &p, const Face &f)
        {
            Vec3 m = p;
            m[f.axis] = 2.0 * f.coordinate - p[f.axis];
            return m;
        }

        bool in_front(const Vec3 &p, const Face &f) { return (p[f.axis] - f.coordinate) * f.outward > 1e-9; }

        // Point where the segment from `from` to `to` crosses the face plane, if
        // it lands strictly inside the face rectangle.
        std::optional<Vec3> hit_face(const Vec3 &from, const Vec3 &to, const Face &f)
        {
            const double den = to[f.axis] - from[f.axis];
            if (std::abs(den) < 1e-15)
                return std::nullopt;
            const double t = (f.coordinate - from[f.axis]) / den;
            if (!(t > 0.0 && t < 1.0))
                return std::nullopt;
            Vec3 q = from + t * (to - from);
            q[f.axis] = f.coordinate;
            for (int ax = 0; ax < 3; ++ax)
            {
                if (ax == f.axis)
                    continue;
                if (!(q[ax] > f.box->min_corner[ax] + 1e-9 && q[ax] < f.box->max_corner[ax] - 1e-9))
                    return std::nullopt;
            }
            return q;
        }

        Path make_path(const std::vector<Vec3> &chain, double wavelength, double reflection_coefficient)
        {
            double length = 0.0;
            for (std::size_t i = 1; i < chain.size(); ++i)
                length += (chain[i] - chain[i - 1]).norm();
            const int bounces = static_cast<int>(chain.size()) - 2;

            Path p;
            p.length = length;
            p.delay = length / kSpeedOfLight;
            p.bounces = bounces;
            p.departure = angles_of(chain[1] - chain[0]);
            p.arrival = angles_of(chain[chain.size() - 2] - chain.back());
            const double amplitude = std::pow(reflection_coefficient, bounces) * wavelength / (4.0 * kPi * length);
            const double phase = -kTwoPi * std::fmod(length / wavelength, 1.0);
            p.gain = std::polar(amplitude, phase);
            return p;
        }

        bool chain_clear(const std::vector<Vec3> &chain, const std::vector<BoxObstacle> &obstacles)
        {
            for (std::size_t i = 1; i < chain.size(); ++i)
                if (segment_blocked(chain[i - 1], chain[i], obstacles))
                    return false;
            return true;
        }
    } // namespace

    bool segment_blocked(const Vec3 &a, const Vec3 &b, const std::vector<BoxObstacle> &obstacles)
    {
        if (a == b)
            throw std::invalid_argument("segment_blocked: degenerate segment");
        for (const auto &box : obstacles)
            if (segment_hits_box(a, b, box))
                return true;
        return false;
    }

    bool point_inside(const Vec3 &p, const std::vector<BoxObstacle> &obstacles)
    {
        for (const auto &box : obstacles)
            if ((p.array() > box.min_corner.array()).all() && (p.array() < box.max_corner.array()).all())
                return true;
        return false;
    }

    PathSet trace_paths(const Scene &scene, const Vec3 &tx, const ArrayGeometry &rx_geom)
    {
        if (point_inside(tx, scene.obstacles))
            throw std::invalid_argument("trace_paths: transmitter lies inside an obstacle");
        const Vec3 rx = rx_geom.origin;
        if (tx == rx)
            throw std::invalid_argument("trace_paths: transmitter and receiver coincide");
        const double lambda = scene.wavelength();
        const double gamma = scene.reflection_coefficient;

        PathSet out;
        if (!segment_blocked(tx, rx, scene.obstacles))
            out.paths.push_back(make_path({tx, rx}, lambda, gamma));

        if (scene.max_reflection_order < 1)
            return out;
        const auto faces = collect_faces(scene.obstacles);

        for (const auto &f : faces)
        {
            if (!in_front(tx, f) || !in_front(rx, f))
                continue;
            const Vec3 image = mirror(tx, f);
            const auto q = hit_face(image, rx, f);
            if (!q)
                continue;
            const std::vector<Vec3> chain{tx, *q, rx};
            if (chain_clear(chain, scene.obstacles))
                out.paths.push_back(make_path(chain, lambda, gamma));
        }

        if (scene.max_reflection_order < 2)
            return out;

        for (const auto &f1 : faces)
        {
            if (!in_front(tx, f1))
                continue;
            const Vec3 image1 = mirror(tx, f1);
            for (const auto &f2 : faces)
            {
                if (&f1 == &f2 || !in_front(rx, f2))
                    continue;
                const Vec3 image2 = mirror(image1, f2);
                const auto q2 = hit_face(image2, rx, f2);
                if (!q2 || !in_front(*q2, f1))
                    continue;
                const auto q1 = hit_face(image1, *q2, f1);
                if (!q1 || !in_front(*q1, f2))
                    continue;
                const std::vector<Vec3> chain{tx, *q1, *q2, rx};
                if (chain_clear(chain, scene.obstacles))
                    out.paths.push_back(make_path(chain, lambda, gamma));
            }
        }
        return out;
    }

    std::uint64_t scene_hash(const Scene &scene)
    {
        Fnv1a h;
        auto put_array = [&h](const ArrayGeometry &g) {
            h.add(static_cast<std::uint64_t>(g.size()));
            for (const auto &p : g.elements)
                h.add(p);
            h.add(g.origin);
            h.add(g.boresight);
            h.add(g.pattern_exponent);
        };
        put_array(scene.bs);
        h.add(static_cast<std::uint64_t>(scene.ems_panels.size()));
        for (const auto &p : scene.ems_panels)
            put_array(p);
        h.add(static_cast<std::uint64_t>(scene.test_points.size()));
        for (const auto &p : scene.test_points)
            h.add(p);
        for (const auto &b : scene.obstacles)
        {
            h.add(b.min_corner);
            h.add(b.max_corner);
        }
        h.add(scene.carrier_frequency);
        h.add(scene.reflection_coefficient);
        h.add(static_cast<std::uint64_t>(scene.max_reflection_order));
        return h.value();
    }
} // namespace emschart
