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

#include "optimizer.hpp"
#include "pipeline.hpp"
#include "scene.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace emschart
{
    struct PlanarArraySpec
    {
        Vec3 center = Vec3::Zero();
        Vec3 boresight = Vec3::UnitX();
        Vec3 vertical_axis = Vec3::UnitZ(); // rows run along this axis; columns along vertical x boresight
        int cols = 1;
        int rows = 1;
        double spacing_wavelengths = 0.5;
        double pattern_exponent = 2.0;

        ArrayGeometry build(double wavelength) const;
    };

    struct SceneSpec
    {
        double carrier_frequency_hz = 30e9;
        double reflection_coefficient = 0.5;
        int max_reflection_order = 1;
        PlanarArraySpec bs;
        std::vector<PlanarArraySpec> ems_panels;
        std::vector<BoxObstacle> obstacles;
    };

    struct GridSpec
    {
        Vec2 region_min{0.0, 0.0};
        Vec2 region_max{80.0, 110.0};
        int cols = 20;
        int rows = 20;
        double ue_height_m = 1.5;
    };

    struct AnchorSpec
    {
        double supervision = 0.15;
    };

    struct MethodSpec
    {
        ChartMethod name = ChartMethod::tsne;
        ChartSettings settings;
    };

    struct EmsSpec
    {
        int codebook_size = 11;
        std::string search = "exhaustive"; // or "greedy"
        int sweeps = 1;
        std::uint64_t budget = 1024;
    };

    struct RunSpec
    {
        double alpha = 0.9;
        MetricKind metric = MetricKind::le;
        std::uint64_t seed = 1;
        unsigned threads = 0;
        std::string output_dir = "out";
    };

    struct TrajectorySpec
    {
        std::vector<Vec2> waypoints;
        double spacing_m = 2.0;
        double threshold_m = 25.0;
    };

    struct ExperimentConfig
    {
        SceneSpec scene;
        RadioParams radio;
        GridSpec grid;
        AnchorSpec anchors;
        MethodSpec method;
        EmsSpec ems;
        RunSpec run;
        TrajectorySpec trajectory;

        void validate() const;
    };

    /// Parses JSON text; errors name the offending field path.
    ExperimentConfig parse_config(const std::string &text);
    ExperimentConfig load_config(const std::filesystem::path &path);
    /// Every field written explicitly; parse(serialize(c)) == c.
    std::string serialize_config(const ExperimentConfig &cfg);

    /// Independent generator streams derived from the run seed.
    struct SeedStreams
    {
        std::uint64_t noise;
        std::uint64_t anchors;
        std::uint64_t tsne;
        std::uint64_t ae;
        std::uint64_t random_phase;
    };
    SeedStreams derive_seeds(std::uint64_t seed);

    struct BuiltScene
    {
        Scene scene;
        std::vector<int> point_ids; // lattice index row * cols + col
        std::size_t dropped = 0;    // lattice points inside obstacles
    };

    /// Scene with test points at lattice cell centres outside the obstacles.
    BuiltScene build_scene(const ExperimentConfig &cfg);

    /// Points every spacing_m along the waypoint polyline (endpoints included).
    /// Throws if any point leaves the region or enters an obstacle.
    std::vector<Vec3> trajectory_points(const ExperimentConfig &cfg);

    /// Chart settings with the derived seeds filled in.
    ChartSettings chart_settings(const ExperimentConfig &cfg);
} // namespace emschart
