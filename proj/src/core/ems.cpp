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
#include "io.hpp"

#include <stdexcept>

namespace emschart
{
    std::string ProfileLabel::to_string() const
    {
        switch (kind)
        {
        case ProfileKind::specular:
            return "specular";
        case ProfileKind::gradient:
            return slope_y == 0 ? "gradient(" + std::to_string(slope_x) + ")"
                                : "gradient(" + std::to_string(slope_x) + "," + std::to_string(slope_y) + ")";
        case ProfileKind::snell:
            return "snell";
        case ProfileKind::random:
            return "random(" + std::to_string(seed) + ")";
        case ProfileKind::aligned:
            return "aligned";
        }
        return "unknown";
    }

    std::size_t Codebook::specular_index() const
    {
        for (std::size_t i = 0; i < profiles.size(); ++i)
        {
            const auto &l = profiles[i].label;
            if (l.kind == ProfileKind::specular || (l.kind == ProfileKind::gradient && l.slope_x == 0 && l.slope_y == 0))
                return i;
        }
        throw std::logic_error("codebook without a specular codeword");
    }

    namespace
    {
        const PlanarLayout &require_layout(const ArrayGeometry &panel)
        {
            if (!panel.layout)
                throw std::invalid_argument("EMS panel must be a rectangular grid");
            if (panel.layout->dx <= 0.0)
                throw std::invalid_argument("EMS panel column spacing must be positive");
            return *panel.layout;
        }
    } // namespace

    PhaseProfile gradient_profile_2d(const ArrayGeometry &panel, int offset_x, int offset_y, double phase_offset)
    {
        const auto &grid = require_layout(panel);
        if (offset_y != 0 && grid.dy <= 0.0)
            throw std::invalid_argument("vertical gradient needs a positive row spacing");
        const double step_x = kTwoPi * offset_x / grid.cols;
        const double step_y = kTwoPi * offset_y / grid.rows;
        const double gamma_x = step_x / grid.dx;
        const double gamma_y = offset_y == 0 ? 0.0 : step_y / grid.dy;

        PhaseProfile p;
        p.phases.resize(panel.size());
        for (std::size_t l = 0; l < panel.size(); ++l)
        {
            // Evaluate on integer column/row counts so the DFT codewords stay
            // exactly orthogonal; gamma * x_l is the same quantity.
            const double cx = static_cast<double>(l % grid.cols);
            const double cy = static_cast<double>(l / grid.cols);
            const double phi = phase_offset + (gamma_x * grid.dx) * cx + (gamma_y * grid.dy) * cy;
            p.phases[l] = wrap_phase(phi);
        }
        if (offset_x == 0 && offset_y == 0)
            p.label = {ProfileKind::specular};
        else
            p.label = {ProfileKind::gradient, offset_x, offset_y};
        return p;
    }

    PhaseProfile gradient_profile(const ArrayGeometry &panel, int slope_index, int codebook_size, double phase_offset)
    {
        if (codebook_size < 1 || codebook_size % 2 == 0)
            throw std::invalid_argument("gradient_profile: codebook size must be odd and positive");
        if (slope_index < 0 || slope_index >= codebook_size)
            throw std::invalid_argument("gradient_profile: slope index " + std::to_string(slope_index) + " outside [0, " +
                                        std::to_string(codebook_size) + ")");
        const int offset = slope_index - (codebook_size - 1) / 2;
        PhaseProfile p = gradient_profile_2d(panel, offset, 0, phase_offset);
        if (offset == 0)
            p.label = {ProfileKind::gradient, 0, 0};
        return p;
    }

    PhaseProfile snell_profile(const ArrayGeometry &panel, const AnglesPair &incident, const AnglesPair &outgoing,
                               double wavelength, double phase_offset)
    {
        const Vec3 ki = wave_vector(incident, wavelength);
        const Vec3 ko = wave_vector(outgoing, wavelength);
        const Vec3 g = ki - ko;
        PhaseProfile p;
        p.phases.resize(panel.size());
        for (std::size_t l = 0; l < panel.size(); ++l)
            p.phases[l] = wrap_phase(phase_offset + g.dot(panel.elements[l] - panel.origin));
        p.label = {ProfileKind::snell};
        return p;
    }

    PhaseProfile random_profile(const ArrayGeometry &panel, std::uint64_t seed)
    {
        Rng rng(seed);
        PhaseProfile p;
        p.phases.resize(panel.size());
        for (auto &phi : p.phases)
            phi = wrap_phase(rng.uniform(0.0, kTwoPi));
        p.label = {ProfileKind::random, 0, 0, seed};
        return p;
    }

    PhaseProfile specular_profile(const ArrayGeometry &panel, double phase_offset)
    {
        PhaseProfile p;
        p.phases.assign(panel.size(), wrap_phase(phase_offset));
        p.label = {ProfileKind::specular};
        return p;
    }

    Codebook build_codebook(const ArrayGeometry &panel, int codebook_size, int panel_index, int vertical_size)
    {
        if (codebook_size < 1 || codebook_size % 2 == 0)
            throw std::invalid_argument("build_codebook: K must be odd and positive (got " + std::to_string(codebook_size) + ")");
        if (vertical_size < 1 || vertical_size % 2 == 0)
            throw std::invalid_argument("build_codebook: vertical size must be odd and positive");
        Codebook cb;
        cb.panel_index = panel_index;
        const int half_x = (codebook_size - 1) / 2;
        const int half_y = (vertical_size - 1) / 2;
        for (int sy = -half_y; sy <= half_y; ++sy)
            for (int sx = -half_x; sx <= half_x; ++sx)
            {
                PhaseProfile p = gradient_profile_2d(panel, sx, sy, 0.0);
                p.label = {ProfileKind::gradient, sx, sy};
                cb.profiles.push_back(std::move(p));
            }
        return cb;
    }

    void write_profile_csv(std::ostream &os, const ArrayGeometry &panel, const PhaseProfile &profile)
    {
        if (profile.size() != panel.size())
            throw std::invalid_argument("write_profile_csv: profile length does not match the panel");
        os << "element,x_m,y_m,phase_rad\n";
        for (std::size_t l = 0; l < profile.size(); ++l)
        {
            const double x = panel.layout ? panel.layout->column_coordinate(l) : 0.0;
            const double y = panel.layout ? panel.layout->row_coordinate(l) : 0.0;
            os << l << ',' << io::format_double(x) << ',' << io::format_double(y) << ',' << io::format_double(profile.phases[l])
               << '\n';
        }
    }
} // namespace emschart
