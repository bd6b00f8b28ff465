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
#include <optional>
#include <vector>

namespace emschart
{
    inline constexpr double kDefaultEigenFloor = 1e-9;

    /// Covariance fingerprint of one test point. The matrix logarithm is filled
    /// in on demand by ensure_log().
    struct CovarianceFeature
    {
        CMatrix R;
        std::optional<CMatrix> logR;
        int point_id = 0;
    };

    /// Symmetric, non-negative, zero diagonal.
    struct DissimilarityMatrix
    {
        Eigen::MatrixXd D;

        Eigen::Index size() const { return D.rows(); }
    };

    /// Principal logarithm of a Hermitian PSD matrix. Eigenvalues are clamped to
    /// at least floor * lambda_max before taking logs. Throws
    /// std::invalid_argument for an all-zero (or non-finite) input.
    CMatrix hermitian_log(const CMatrix &R, double floor = kDefaultEigenFloor);

    /// U exp(Lambda) U^H for a Hermitian input; used to verify hermitian_log.
    CMatrix hermitian_exp(const CMatrix &A);

    /// Computes and caches the log of the feature's covariance.
    const CMatrix &ensure_log(CovarianceFeature &feature, double floor = kDefaultEigenFloor);

    /// Frobenius norm of the difference of two matrix logarithms.
    double le_distance(const CMatrix &logA, const CMatrix &logB);
    double le_distance(CovarianceFeature &a, CovarianceFeature &b);

    /// Pairwise log-Euclidean distances. Each unordered pair is computed once.
    /// A feature whose covariance cannot be logged raises an error naming its point_id.
    DissimilarityMatrix dissimilarity_matrix(std::vector<CovarianceFeature> &features, double floor = kDefaultEigenFloor);

    /// Same computation on precomputed logarithms.
    DissimilarityMatrix dissimilarity_from_logs(const std::vector<CMatrix> &logs);

    void write_dissimilarity_bin(const std::filesystem::path &path, const DissimilarityMatrix &d);
    DissimilarityMatrix read_dissimilarity_bin(const std::filesystem::path &path);
    void write_dissimilarity_csv(const std::filesystem::path &path, const DissimilarityMatrix &d);

    /// Covariance cache: uint64 count, uint64 N, then per feature int64 point_id
    /// followed by N*N (re, im) float64 pairs, row-major.
    void write_covariances_bin(const std::filesystem::path &path, const std::vector<CovarianceFeature> &features);
    std::vector<CovarianceFeature> read_covariances_bin(const std::filesystem::path &path);
} // namespace emschart
