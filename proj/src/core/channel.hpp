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

#include "ems.hpp"
#include "features.hpp"
#include "scene.hpp"

#include <vector>

namespace emschart
{
    struct RadioParams
    {
        double tx_power_dbm = 23.0;
        double noise_power_dbm = -92.0;
        double bandwidth_hz = 10e6;
        int snapshots = 64;

        void validate() const;
    };

    /// Path sets of every link a user sees: UE->BS, UE->panel j, panel j->BS.
    struct LinkBundle
    {
        PathSet direct;
        std::vector<PathSet> incident;
        std::vector<PathSet> outgoing;

        std::size_t panel_count() const { return incident.size(); }
    };

    /// Narrowband link matrices assembled from a LinkBundle.
    struct LinkChannels
    {
        CVector direct;                 // N_BS
        std::vector<CVector> incident;  // L per panel
        std::vector<CMatrix> outgoing;  // N_BS x L per panel
    };

    /// Narrowband superposition
    ///   H = P^{-1/2} sum_p alpha_p rho_rx rho_tx a_rx(arrival) a_tx(departure)^T,
    /// an N_rx x N_tx matrix. The transmit steering vector is not conjugated:
    /// departure angles are propagation directions, so exp(j k^T p) already is
    /// the path-length advance of each transmit element. Empty set -> zeros.
    CMatrix aggregate_narrowband(const PathSet &paths, const ArrayGeometry &rx_geom, const ArrayGeometry &tx_geom, double wavelength);

    /// H_o diag(exp(j phi)) h_i.
    CVector ems_channel(const CMatrix &outgoing, const PhaseProfile &profile, const CVector &incident);

    /// Traces every link of one user.
    LinkBundle trace_links(const Scene &scene, const Vec3 &ue);

    /// The panel->BS matrix does not depend on the user; trace it once per panel.
    CMatrix panel_to_bs_channel(const Scene &scene, std::size_t panel);

    LinkChannels assemble_links(const LinkBundle &bundle, const Scene &scene, const Vec3 &ue);

    /// h(S) = h_d + sum_j H_o,j Phi_j h_i,j over deployed panels.
    CVector composite_channel(const LinkChannels &links, const EmsConfiguration &config);
    CVector composite_channel(const LinkBundle &bundle, const EmsConfiguration &config, const Scene &scene, const Vec3 &ue);

    /// 10 log10(P_s |h|^2 / P_n); -inf for h = 0.
    double snr_db(const CVector &h, const RadioParams &params);

    /// Per-entry noise variance sigma_n^2 / sigma_s^2 of the observation model.
    double noise_variance(const RadioParams &params);

    /// Sample covariance of N_s noisy observations h + n_s with n_s ~ CN(0, noise_variance I).
    CovarianceFeature estimate_covariance(const CVector &h, const RadioParams &params, std::uint64_t seed, int point_id = 0);

    /// Generator seed for point `index` under a global seed.
    inline std::uint64_t point_seed(std::uint64_t global_seed, std::uint64_t index) { return mix_seed(global_seed, index); }
} // namespace emschart
