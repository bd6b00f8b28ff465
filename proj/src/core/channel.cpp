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

#include <stdexcept>
#include <string>

namespace emschart
{
    void RadioParams::validate() const
    {
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("radio: bandwidth must be positive");
        if (snapshots < 1)
            throw std::invalid_argument("radio: at least one snapshot is required");
        if (std::isnan(tx_power_dbm) || std::isnan(noise_power_dbm))
            throw std::invalid_argument("radio: powers must be numbers");
    }

    CMatrix aggregate_narrowband(const PathSet &paths, const ArrayGeometry &rx_geom, const ArrayGeometry &tx_geom, double wavelength)
    {
        const auto nrx = static_cast<Eigen::Index>(rx_geom.size());
        const auto ntx = static_cast<Eigen::Index>(tx_geom.size());
        CMatrix h = CMatrix::Zero(nrx, ntx);
        if (paths.empty())
            return h;
        for (const auto &p : paths.paths)
        {
            const double rho = element_pattern(rx_geom, unit_vector(p.arrival)) * element_pattern(tx_geom, unit_vector(p.departure));
            if (rho == 0.0)
                continue;
            const CVector a_rx = array_response(rx_geom, p.arrival, wavelength);
            const CVector a_tx = array_response(tx_geom, p.departure, wavelength);
            h.noalias() += (p.gain * rho) * (a_rx * a_tx.transpose());
        }
        h /= std::sqrt(static_cast<double>(paths.paths.size()));
        return h;
    }

    CVector ems_channel(const CMatrix &outgoing, const PhaseProfile &profile, const CVector &incident)
    {
        const auto L = outgoing.cols();
        if (incident.size() != L || static_cast<Eigen::Index>(profile.size()) != L)
            throw std::invalid_argument("ems_channel: dimension mismatch (H_o has " + std::to_string(L) + " columns, profile " +
                                        std::to_string(profile.size()) + ", incident " + std::to_string(incident.size()) + ")");
        CVector reflected(L);
        for (Eigen::Index l = 0; l < L; ++l)
        {
            const double phi = profile.phases[static_cast<std::size_t>(l)];
            reflected[l] = Complex(std::cos(phi), std::sin(phi)) * incident[l];
        }
        return outgoing * reflected;
    }

    LinkBundle trace_links(const Scene &scene, const Vec3 &ue)
    {
        LinkBundle b;
        b.direct = trace_paths(scene, ue, scene.bs);
        b.direct.kind = LinkKind::direct;
        for (std::size_t j = 0; j < scene.panel_count(); ++j)
        {
            PathSet in = trace_paths(scene, ue, scene.ems_panels[j]);
            in.kind = LinkKind::ue_to_ems;
            in.panel = static_cast<int>(j);
            b.incident.push_back(std::move(in));

            PathSet out = trace_paths(scene, scene.ems_panels[j].origin, scene.bs);
            out.kind = LinkKind::ems_to_bs;
            out.panel = static_cast<int>(j);
            b.outgoing.push_back(std::move(out));
        }
        return b;
    }

    CMatrix panel_to_bs_channel(const Scene &scene, std::size_t panel)
    {
        const auto &geom = scene.ems_panels.at(panel);
        const PathSet out = trace_paths(scene, geom.origin, scene.bs);
        return aggregate_narrowband(out, scene.bs, geom, scene.wavelength());
    }

    LinkChannels assemble_links(const LinkBundle &bundle, const Scene &scene, const Vec3 &ue)
    {
        if (bundle.panel_count() != scene.panel_count() || bundle.outgoing.size() != scene.panel_count())
            throw std::invalid_argument("assemble_links: bundle panel count does not match the scene");
        const double lambda = scene.wavelength();
        const ArrayGeometry ue_geom = point_array(ue);
        LinkChannels lc;
        lc.direct = aggregate_narrowband(bundle.direct, scene.bs, ue_geom, lambda).col(0);
        for (std::size_t j = 0; j < scene.panel_count(); ++j)
        {
            const auto &panel = scene.ems_panels[j];
            lc.incident.push_back(aggregate_narrowband(bundle.incident[j], panel, ue_geom, lambda).col(0));
            lc.outgoing.push_back(aggregate_narrowband(bundle.outgoing[j], scene.bs, panel, lambda));
        }
        return lc;
    }

    CVector composite_channel(const LinkChannels &links, const EmsConfiguration &config)
    {
        if (config.size() != links.incident.size())
            throw std::invalid_argument("composite_channel: configuration has " + std::to_string(config.size()) +
                                        " panels, links have " + std::to_string(links.incident.size()));
        CVector h = links.direct;
        for (std::size_t j = 0; j < config.size(); ++j)
            if (config.panels[j])
                h += ems_channel(links.outgoing[j], *config.panels[j], links.incident[j]);
        return h;
    }

    CVector composite_channel(const LinkBundle &bundle, const EmsConfiguration &config, const Scene &scene, const Vec3 &ue)
    {
        return composite_channel(assemble_links(bundle, scene, ue), config);
    }

    double snr_db(const CVector &h, const RadioParams &params)
    {
        const double gain = h.squaredNorm();
        if (gain == 0.0)
            return -std::numeric_limits<double>::infinity();
        const double ps = dbm_to_watts(params.tx_power_dbm);
        const double pn = dbm_to_watts(params.noise_power_dbm);
        if (pn == 0.0)
            return std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(ps * gain / pn);
    }

    double noise_variance(const RadioParams &params)
    {
        const double ps = dbm_to_watts(params.tx_power_dbm);
        const double pn = dbm_to_watts(params.noise_power_dbm);
        if (!(ps > 0.0))
            throw std::invalid_argument("radio: transmit power must be positive");
        return pn / ps;
    }

    CovarianceFeature estimate_covariance(const CVector &h, const RadioParams &params, std::uint64_t seed, int point_id)
    {
        params.validate();
        CovarianceFeature f;
        f.point_id = point_id;
        const double var = noise_variance(params);
        if (var == 0.0)
        {
            f.R = h * h.adjoint();
            return f;
        }
        const double scale = std::sqrt(0.5 * var);
        const auto n = h.size();
        const int ns = params.snapshots;
        Rng rng(seed);
        CMatrix X(n, ns);
        for (int s = 0; s < ns; ++s)
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const double re = rng.normal();
                const double im = rng.normal();
                X(i, s) = h[i] + scale * Complex(re, im);
            }
        CMatrix R = (X * X.adjoint()) / static_cast<double>(ns);
        f.R = 0.5 * (R + R.adjoint());
        return f;
    }
} // namespace emschart
