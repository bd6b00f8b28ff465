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

#include "autoencoder.hpp"
#include "channel.hpp"
#include "metrics.hpp"
#include "tsne.hpp"

#include <optional>
#include <string>
#include <vector>

namespace emschart
{
    enum class ChartMethod
    {
        tsne,
        ae
    };

    std::string to_string(ChartMethod m);
    ChartMethod method_from_string(const std::string &s);

    /// Hidden layers of the autoencoder; input and latent widths follow from the data.
    struct AeTopology
    {
        std::vector<int> hidden_widths{512, 128, 32};
        std::vector<Activation> hidden_activations{Activation::relu, Activation::relu, Activation::tanh};

        MlpSpec spec(int input_dim, int latent_dim = 2) const;
    };

    struct ChartSettings
    {
        TsneConfig tsne;
        AeConfig ae;
        AeTopology topology;
        int kappa = 0; // 0: default for the evaluation set size
    };

    /// ceil(fraction * |candidates|) candidates drawn uniformly without
    /// replacement, returned in ascending order.
    std::vector<int> select_anchor_indices(const std::vector<int> &candidates, double fraction, std::uint64_t seed);

    AnchorSet make_anchor_set(const std::vector<int> &indices, const Eigen::MatrixXd &truth);

    /// Everything a configuration evaluation needs that does not depend on the
    /// configuration: per-user link channels, the panel->BS matrices and the
    /// per-codeword reflected terms.
    struct PipelineContext
    {
        Scene scene;
        RadioParams radio;
        std::uint64_t noise_seed = 0;
        std::vector<int> point_ids;
        Eigen::MatrixXd truth; // N x 2, horizontal positions
        AnchorSet anchors;
        std::vector<bool> anchored;
        std::vector<bool> excluded; // never scored (e.g. anchors of another run)
        ChartSettings chart;
        unsigned threads = 1;

        std::vector<CVector> direct;                // [u]
        std::vector<std::vector<CVector>> incident; // [u][panel]
        std::vector<CMatrix> outgoing;              // [panel]
        std::vector<std::vector<std::optional<Path>>> strongest_incident; // [u][panel]
        std::vector<std::optional<Path>> strongest_outgoing;              // [panel]

        std::vector<Codebook> codebooks;                      // [panel]
        std::vector<std::vector<std::vector<CVector>>> terms; // [panel][codeword][u]

        std::uint64_t hash = 0;

        std::size_t size() const { return point_ids.size(); }
        std::size_t panel_count() const { return outgoing.size(); }
    };

    /// Traces every link and precomputes codeword terms. Point ids default to 0..N-1.
    PipelineContext build_context(const Scene &scene, const RadioParams &radio, std::uint64_t noise_seed, const std::vector<int> &anchor_indices,
                                  const ChartSettings &chart, int codebook_size, unsigned threads, std::vector<int> point_ids = {});

    /// Channels with codeword `indices[j]` on panel j; -1 leaves the panel out.
    std::vector<CVector> codebook_channels(const PipelineContext &ctx, const std::vector<int> &indices);

    /// Channels for an explicit configuration shared by all users.
    std::vector<CVector> configuration_channels(const PipelineContext &ctx, const EmsConfiguration &config);

    /// Per-user anomalous reflection aligned to the strongest incident and
    /// outgoing paths, co-phased with the rest of the channel.
    std::vector<CVector> idealized_ris_channels(const PipelineContext &ctx);

    /// The per-user panel profile used by idealized_ris_channels, or nullopt
    /// when the panel cannot see the user or the BS.
    std::optional<PhaseProfile> aligned_profile(const PipelineContext &ctx, std::size_t user, std::size_t panel);

    /// Chart of precomputed dissimilarities (t-SNE) or log-covariances (AE).
    struct ChartFit
    {
        Eigen::MatrixXd embedding; // N x 2, meters
        std::optional<Embedding> tsne;
        std::optional<AeTrainResult> ae;
    };

    ChartFit fit_chart(const Eigen::MatrixXd &dissimilarity, const std::vector<CMatrix> &logs, const AnchorSet &anchors, const ChartSettings &chart,
                       ChartMethod method);

    struct ChartRun
    {
        std::vector<double> snr_db;
        std::vector<CovarianceFeature> covariances;
        Eigen::MatrixXd dissimilarity;
        Eigen::MatrixXd embedding; // N x 2, meters
        std::vector<bool> anchored;
        MetricReport report;
        double final_kl = 0.0;
        std::vector<KlSample> kl_trace;
        std::optional<AeTrainResult> ae;
    };

    /// Features of every user: sample covariance with per-point seeds.
    /// `threads` = 0 uses the context's setting.
    std::vector<CovarianceFeature> estimate_features(const PipelineContext &ctx, const std::vector<CVector> &channels, unsigned threads = 0);

    /// channel -> features -> chart -> metrics.
    ChartRun run_chart(const PipelineContext &ctx, const std::vector<CVector> &channels, ChartMethod method, bool keep_features = false,
                       unsigned threads = 0);

    double median_snr_db(const std::vector<double> &snr);
} // namespace emschart
