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

#include "common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace emschart
{
    /// Azimuth in [-pi, pi), elevation in [-pi/2, pi/2].
    struct AnglesPair
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    /// Angles of a (non-zero) direction vector.
    AnglesPair angles_of(const Vec3 &direction);

    /// Unit vector for a pair of angles.
    Vec3 unit_vector(const AnglesPair &angles);

    /// k = (2 pi / lambda) [cos(el) cos(az), cos(el) sin(az), sin(el)].
    Vec3 wave_vector(const AnglesPair &angles, double wavelength);

    /// Rectangular element grid of a planar array. Element l sits at
    /// row = l / cols, col = l % cols.
    struct PlanarLayout
    {
        int cols = 1;
        int rows = 1;
        double dx = 0.0; // column spacing along the horizontal axis (m)
        double dy = 0.0; // row spacing along the vertical axis (m)
        Vec3 horizontal_axis = Vec3::UnitX();
        Vec3 vertical_axis = Vec3::UnitZ();

        double column_coordinate(std::size_t element) const { return static_cast<double>(element % cols) * dx; }
        double row_coordinate(std::size_t element) const { return static_cast<double>(element / cols) * dy; }
    };

    /// Antenna or meta-atom array. Element positions are global; `origin` is the
    /// phase reference and the point the ray engine traces to.
    struct ArrayGeometry
    {
        std::vector<Vec3> elements;
        Vec3 origin = Vec3::Zero();
        Vec3 boresight = Vec3::UnitX();
        double pattern_exponent = 0.0; // cos^q element pattern; q = 0 is isotropic
        std::optional<PlanarLayout> layout;

        std::size_t size() const { return elements.size(); }
    };

    /// Single isotropic element at `position` (the user terminal).
    ArrayGeometry point_array(const Vec3 &position);

    /// Planar cols x rows grid centred on `center`. The boresight is
    /// horizontal x vertical, normalised.
    ArrayGeometry planar_array(const Vec3 &center, const Vec3 &horizontal_axis, const Vec3 &vertical_axis, int cols, int rows,
                               double dx, double dy, double pattern_exponent);

    /// Throws std::invalid_argument when the geometry is empty or has repeated elements.
    void validate(const ArrayGeometry &geom);

    /// a_n = exp(j k^T (p_n - origin)).
    CVector array_response(const ArrayGeometry &geom, const AnglesPair &angles, double wavelength);

    /// cos^q of the angle between the boresight and `direction`; zero behind the array.
    double element_pattern(const ArrayGeometry &geom, const Vec3 &direction);

    struct BoxObstacle
    {
        Vec3 min_corner;
        Vec3 max_corner;
    };

    void validate(const BoxObstacle &box);

    /// True iff the open segment (a, b) passes through the interior of a box.
    /// Touching a face, edge or corner does not block.
    bool segment_blocked(const Vec3 &a, const Vec3 &b, const std::vector<BoxObstacle> &obstacles);

    /// True iff `p` lies strictly inside a box.
    bool point_inside(const Vec3 &p, const std::vector<BoxObstacle> &obstacles);

    struct Scene
    {
        ArrayGeometry bs;
        std::vector<ArrayGeometry> ems_panels;
        std::vector<Vec3> test_points;
        std::vector<BoxObstacle> obstacles;
        double carrier_frequency = 30e9;
        double reflection_coefficient = 0.5; // amplitude loss per bounce
        int max_reflection_order = 1;

        double wavelength() const { return kSpeedOfLight / carrier_frequency; }
        std::size_t panel_count() const { return ems_panels.size(); }
    };

    struct Path
    {
        Complex gain;       // includes free-space loss, bounce loss and carrier phase
        AnglesPair departure; // propagation direction leaving the transmitter
        AnglesPair arrival;   // direction from the receiver back towards the last hop
        double length = 0.0;
        double delay = 0.0;
        int bounces = 0;
    };

    enum class LinkKind
    {
        direct,
        ue_to_ems,
        ems_to_bs
    };

    struct PathSet
    {
        std::vector<Path> paths;
        LinkKind kind = LinkKind::direct;
        int panel = -1;

        bool empty() const { return paths.empty(); }
    };

    /// Direct path plus specular reflections off box faces up to the scene's
    /// reflection order (image-source construction). Traces from `tx` to the
    /// receiver's origin.
    PathSet trace_paths(const Scene &scene, const Vec3 &tx, const ArrayGeometry &rx_geom);

    /// Stable content hash of a scene, used as a cache key.
    std::uint64_t scene_hash(const Scene &scene);
} // namespace emschart
