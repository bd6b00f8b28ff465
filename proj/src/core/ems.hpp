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

#include "scene.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace emschart
{
    enum class ProfileKind
    {
        specular,
        gradient,
        snell,
        random,
        aligned
    };

    struct ProfileLabel
    {
        ProfileKind kind = ProfileKind::specular;
        int slope_x = 0;         // gradient: horizontal DFT offset
        int slope_y = 0;         // gradient: vertical DFT offset (0 unless 2-D codebooks are enabled)
        std::uint64_t seed = 0;  // random

        std::string to_string() const;
        bool operator==(const ProfileLabel &) const = default;
    };

    /// One phase per meta-atom, each kept in [0, 2pi).
    struct PhaseProfile
    {
        std::vector<double> phases;
        ProfileLabel label;

        std::size_t size() const { return phases.size(); }
        bool operator==(const PhaseProfile &o) const { return phases == o.phases; }
    };

    struct Codebook
    {
        std::vector<PhaseProfile> profiles;
        int panel_index = 0;

        std::size_t size() const { return profiles.size(); }
        /// Position of the zero-slope codeword.
        std::size_t specular_index() const;
    };

    /// One entry per panel; an empty optional means the panel is not deployed.
    struct EmsConfiguration
    {
        std::vector<std::optional<PhaseProfile>> panels;

        std::size_t size() const { return panels.size(); }
    };

    /// Horizontal DFT gradient. Slope index a in [0, K) maps to the integer
    /// column offset s = a - (K - 1) / 2; the per-column increment is
    /// 2 pi s / cols. K must be odd.
    PhaseProfile gradient_profile(const ArrayGeometry &panel, int slope_index, int codebook_size, double phase_offset = 0.0);

    /// Separable horizontal and vertical DFT gradient with explicit offsets.
    PhaseProfile gradient_profile_2d(const ArrayGeometry &panel, int offset_x, int offset_y, double phase_offset = 0.0);

    /// Planar anomalous reflector steering a plane wave travelling along
    /// `incident` into the direction `outgoing` (both are propagation
    /// directions). Under the exp(-j k r) phase convention used by the channel
    /// model the required profile is Phi0 + (k_i - k_o)^T (p_l - origin).
    PhaseProfile snell_profile(const ArrayGeometry &panel, const AnglesPair &incident, const AnglesPair &outgoing,
                               double wavelength, double phase_offset = 0.0);

    /// i.i.d. uniform phases from a seeded generator.
    PhaseProfile random_profile(const ArrayGeometry &panel, std::uint64_t seed);

    /// Constant profile.
    PhaseProfile specular_profile(const ArrayGeometry &panel, double phase_offset = 0.0);

    /// K horizontal gradients (K odd), optionally crossed with `vertical_size`
    /// vertical gradients (odd as well). The specular codeword is always present.
    Codebook build_codebook(const ArrayGeometry &panel, int codebook_size, int panel_index = 0, int vertical_size = 1);

    /// Writes "element,x_m,y_m,phase_rad" rows.
    void write_profile_csv(std::ostream &os, const ArrayGeometry &panel, const PhaseProfile &profile);
} // namespace emschart
