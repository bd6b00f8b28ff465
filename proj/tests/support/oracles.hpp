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
#include "metrics.hpp"
#include "tsne.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace emschart::oracle
{
    /// Symmetric matrix of distances between random points in the plane.
    Eigen::MatrixXd random_distances(int n, std::mt19937_64 &rng, int dim = 3);

    /// Max relative error of kl_gradient against central differences of
    /// kl_divergence on a random n-point instance.
    double kl_gradient_error(std::uint64_t seed, int n = 8, double step = 1e-5);

    /// Max relative error of the AE backprop against central differences over
    /// every weight and bias of `spec`, on a batch of `batch` random rows with
    /// two labelled rows.
    double ae_gradient_error(const MlpSpec &spec, std::uint64_t seed, int batch = 6, double step = 1e-5);

    /// (12, 8, 2) encoder mirrored into (2, 8, 12), tanh then relu hidden layers.
    MlpSpec small_ae_spec();

    /// Trustworthiness from its definition: sets of kappa nearest neighbours by
    /// a full sort (ties to the lower index), penalty summed in integers.
    std::vector<double> brute_trustworthiness(const Eigen::MatrixXd &original, const Eigen::MatrixXd &latent, int kappa);
    std::vector<double> brute_continuity(const Eigen::MatrixXd &original, const Eigen::MatrixXd &latent, int kappa);

    /// |H(p) - log2(target)| in bits for a calibrated row, with H recomputed here.
    double entropy_gap_bits(const std::vector<double> &row, double perplexity);
} // namespace emschart::oracle
