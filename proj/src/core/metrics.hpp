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
#include <string>
#include <vector>

namespace emschart
{
    /// Objective sign convention: LE is minimised as is, TW and CT negated.
    enum class MetricKind
    {
        le,
        tw,
        ct
    };

    std::string to_string(MetricKind m);
    MetricKind metric_from_string(const std::string &s);

    /// Per-point Euclidean distance between rows.
    std::vector<double> localization_error(const Eigen::MatrixXd &estimate, const Eigen::MatrixXd &truth);

    /// Pairwise Euclidean distances between rows.
    Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd &points);

    /// Neighbour order and 1-based ranks for every point; ties go to the lower index.
    struct RankTable
    {
        Eigen::Index n = 0;
        std::vector<int> order; // row u: the n - 1 other points, nearest first
        std::vector<int> rank;  // rank[u * n + v]; 0 on the diagonal

        int neighbor(Eigen::Index u, Eigen::Index pos) const { return order[static_cast<std::size_t>(u * (n - 1) + pos)]; }
        int rank_of(Eigen::Index u, Eigen::Index v) const { return rank[static_cast<std::size_t>(u * n + v)]; }
    };

    RankTable neighbor_ranks(const Eigen::MatrixXd &dist);

    /// Largest kappa with kappa < (n - 1) / 2; 0 if none.
    int max_valid_kappa(Eigen::Index n);
    /// 50, or max(5, n / 10) below 500 points, capped by max_valid_kappa.
    int default_kappa(Eigen::Index n);
    /// Normalisation 2 / (kappa (2n - 3 kappa - 1)).
    double neighborhood_norm(int kappa, Eigen::Index n);

    struct NeighborhoodScores
    {
        std::vector<double> values;
        bool degenerate = false; // all distances equal in one of the spaces; scores set to 1
    };

    /// Trustworthiness from original dissimilarities and latent distances.
    NeighborhoodScores trustworthiness_from_distances(const Eigen::MatrixXd &original, const Eigen::MatrixXd &latent, int kappa);
    /// Continuity: latent neighbours ranked against original ones.
    NeighborhoodScores continuity_from_distances(const Eigen::MatrixXd &original, const Eigen::MatrixXd &latent, int kappa);

    NeighborhoodScores trustworthiness(const Eigen::MatrixXd &original, const Eigen::MatrixXd &embedding, int kappa);
    NeighborhoodScores continuity(const Eigen::MatrixXd &original, const Eigen::MatrixXd &embedding, int kappa);

    /// Nearest-rank quantile: the ceil(alpha n)-th smallest value.
    double quantile(std::vector<double> values, double alpha);

    double mean(const std::vector<double> &values);

    struct DropoutResult
    {
        double fraction = 0.0;
        std::vector<bool> flags;
    };

    DropoutResult trajectory_dropout(const Eigen::MatrixXd &estimate, const Eigen::MatrixXd &truth, double threshold_m = 25.0);

    struct MetricReport
    {
        std::vector<int> point_ids;
        std::vector<double> le;
        std::vector<double> tw;
        std::vector<double> ct;
        int kappa = 0;
        bool neighborhood_degenerate = false;

        const std::vector<double> &values(MetricKind m) const;
        /// alpha-quantile of LE, -TW or -CT.
        double objective(MetricKind m, double alpha) const;
    };

    /// Metrics over the unanchored points (all points when every one is anchored).
    /// kappa <= 0 selects default_kappa of the evaluation set.
    MetricReport evaluate_chart(const Eigen::MatrixXd &dissimilarity, const Eigen::MatrixXd &embedding, const Eigen::MatrixXd &truth,
                                const std::vector<bool> &anchored, const std::vector<int> &point_ids, int kappa = 0);

    void write_metrics_csv(const std::filesystem::path &path, const MetricReport &r);
    /// Mean and 0.5 / 0.9 / 0.95 quantiles per metric.
    std::string summary_json(const MetricReport &r);
} // namespace emschart
