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

#include <filesystem>
#include <span>
#include <vector>

namespace emschart
{
    struct TsneConfig
    {
        double perplexity = 30.0;
        int iterations = 1000;
        double learning_rate = 100.0;
        double momentum = 0.8;
        double exaggeration = 4.0;
        int exaggeration_iters = 250;
        int latent_dim = 2;
        std::uint64_t seed = 0;
        double init_scale = 1.0;        // std of the initial cloud around the anchor centroid (m)
        double monotone_fraction = 0.1; // trailing share of iterations with overshoot rejection
        int trace_every = 50;

        void validate(Eigen::Index n_points) const;
    };

    /// Labelled points clamped to their physical coordinates.
    struct AnchorSet
    {
        std::vector<int> indices;
        Eigen::MatrixXd coordinates; // |I| x latent_dim

        std::size_t size() const { return indices.size(); }
        void validate(Eigen::Index n_points, int latent_dim) const;
    };

    struct KlSample
    {
        int iteration = 0;
        double kl = 0.0;
    };

    struct Embedding
    {
        Eigen::MatrixXd Z; // N x latent_dim
        std::vector<bool> anchored;
        double final_kl = 0.0;
        std::vector<KlSample> kl_trace;
        int exaggeration_end = 0;

        Eigen::Index size() const { return Z.rows(); }
    };

    struct SigmaCalibration
    {
        double sigma = 0.0;
        double beta = 0.0; // 1 / (2 sigma^2)
        double perplexity = 0.0;
        double entropy_bits = 0.0;
        int steps = 0;
        bool saturated = false; // target unreachable; sigma pushed to its limit
    };

    /// Bandwidth of the Gaussian kernel over `distances` (to all other points)
    /// whose conditional distribution has the target perplexity (2^H, H in bits).
    SigmaCalibration calibrate_sigma(std::span<const double> distances, double perplexity);

    /// Conditional distribution of one row for a calibrated precision beta.
    std::vector<double> conditional_row(std::span<const double> distances, double beta);

    /// Row u holds p_{v|u}; zero diagonal.
    Eigen::MatrixXd conditional_p(const Eigen::MatrixXd &D, double perplexity);

    /// Symmetrised joint probabilities (p_{v|u} + p_{u|v}) / (2N); sums to one.
    Eigen::MatrixXd joint_p(const Eigen::MatrixXd &D, double perplexity);

    /// Student-t (one degree of freedom) similarities over all ordered pairs; sums to one.
    Eigen::MatrixXd student_q(const Eigen::MatrixXd &Z);

    /// 4 sum_v (p_uv - q_uv) (z_u - z_v) / (1 + |z_u - z_v|^2) for every row of Z.
    Eigen::MatrixXd kl_gradient(const Eigen::MatrixXd &P, const Eigen::MatrixXd &Q, const Eigen::MatrixXd &Z);

    /// sum p log(p / q) over p > 0.
    double kl_divergence(const Eigen::MatrixXd &P, const Eigen::MatrixXd &Q);

    /// Semi-supervised t-SNE: momentum gradient descent on the free points with
    /// anchors re-clamped after every step.
    Embedding run_stsne(const Eigen::MatrixXd &D, const AnchorSet &anchors, const TsneConfig &cfg);

    /// "point_id,x,y,anchored" rows (first two latent coordinates).
    void write_embedding_csv(const std::filesystem::path &path, const Embedding &e, const std::vector<int> &point_ids);
    void write_kl_trace_csv(const std::filesystem::path &path, const Embedding &e);
} // namespace emschart
