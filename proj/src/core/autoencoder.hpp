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
#include "tsne.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace emschart
{
    /// Real feature vector of a Hermitian N x N matrix, length N (N + 1):
    /// upper-triangle real parts (diagonal included, row-major), strict-upper
    /// imaginary parts (row-major), then N reserved zeros.
    Eigen::VectorXd featurize(const CMatrix &logR);

    /// Inverse of featurize for an N x N Hermitian matrix.
    CMatrix unfeaturize(const Eigen::VectorXd &values, Eigen::Index n);

    inline Eigen::Index feature_dim(Eigen::Index n) { return n * (n + 1); }

    /// Per-coordinate affine standardisation; rows are samples.
    struct Standardizer
    {
        Eigen::VectorXd mean;
        Eigen::VectorXd scale; // population std, floored

        static constexpr double kFloor = 1e-8;

        static Standardizer fit(const Eigen::MatrixXd &rows);
        static Standardizer identity(Eigen::Index dim);
        Eigen::MatrixXd apply(const Eigen::MatrixXd &rows) const;
        Eigen::VectorXd apply(const Eigen::VectorXd &x) const;
    };

    enum class Activation
    {
        linear,
        relu,
        tanh
    };

    std::string to_string(Activation a);
    Activation activation_from_string(const std::string &s);

    struct MlpSpec
    {
        /// Input -> ... -> latent; the decoder mirrors these widths.
        std::vector<int> encoder_widths;
        /// One per hidden encoder layer; the latent layer is linear.
        std::vector<Activation> encoder_activations;
        /// One per hidden decoder layer; empty means mirrored encoder activations.
        std::vector<Activation> decoder_activations;

        static MlpSpec defaults(int input_dim, int latent_dim = 2);

        int input_dim() const { return encoder_widths.front(); }
        int latent_dim() const { return encoder_widths.back(); }
        std::vector<Activation> resolved_decoder_activations() const;
        void validate() const;
    };

    struct AeConfig
    {
        double alpha = 1.0;  // reconstruction
        double beta = 10.0;  // latent vs label
        double gamma = 1.0;  // decoded label vs input
        double eta = 0.0;    // weight decay
        double learning_rate = 1e-3;
        int batch_size = 32;
        int epochs = 200;
        std::uint64_t seed = 0;
        bool normalize_labels = true; // fit latent units to the anchor spread

        void validate() const;
    };

    struct DenseLayer
    {
        Eigen::MatrixXd W; // out x in
        Eigen::VectorXd b;
        Activation act = Activation::linear;
    };

    struct AeModel
    {
        std::vector<DenseLayer> encoder;
        std::vector<DenseLayer> decoder;
        Standardizer features;
        /// Latent units -> meters: y = label_center + label_scale * z.
        Eigen::VectorXd label_center;
        double label_scale = 1.0;

        int input_dim() const { return static_cast<int>(encoder.front().W.cols()); }
        int latent_dim() const { return static_cast<int>(encoder.back().W.rows()); }
    };

    /// Fan-in scaled symmetric uniform weights, zero biases.
    AeModel init_model(const MlpSpec &spec, std::uint64_t seed);

    struct AeOutput
    {
        Eigen::VectorXd z;
        Eigen::VectorXd reconstruction;
    };

    /// Encoder then decoder on one standardised feature vector.
    AeOutput forward(const AeModel &model, const Eigen::VectorXd &x);

    /// Latent codes of standardised rows (N x F -> N x d).
    Eigen::MatrixXd encode(const AeModel &model, const Eigen::MatrixXd &rows);

    /// Labels of a batch: row indices into the batch and their targets in latent units.
    struct BatchLabels
    {
        std::vector<int> rows;
        Eigen::MatrixXd targets; // |L| x d
    };

    struct LossBreakdown
    {
        double total = 0.0;
        double reconstruction = 0.0; // L_AE
        double encoder = 0.0;        // L_E
        double decoder = 0.0;        // L_D
        bool labels_empty = false;
    };

    struct LayerGrad
    {
        Eigen::MatrixXd dW;
        Eigen::VectorXd db;
    };

    struct AeGradient
    {
        std::vector<LayerGrad> encoder;
        std::vector<LayerGrad> decoder;
    };

    LossBreakdown loss_total(const AeModel &model, const Eigen::MatrixXd &batch, const BatchLabels &labels, const AeConfig &cfg);

    /// Loss and its analytic gradient with respect to every weight and bias.
    LossBreakdown loss_and_gradient(const AeModel &model, const Eigen::MatrixXd &batch, const BatchLabels &labels, const AeConfig &cfg,
                                    AeGradient &grad);

    struct AeTrainResult
    {
        AeModel model;
        std::vector<LossBreakdown> trace; // full-data loss before training and after every epoch
    };

    /// Fits standardisation (and label scaling) on the anchors, then runs
    /// shuffled mini-batch gradient descent. `features` rows are raw feature vectors.
    AeTrainResult train_autoencoder(const Eigen::MatrixXd &features, const AnchorSet &anchors, const MlpSpec &spec, const AeConfig &cfg);

    /// Positions in meters for raw feature rows.
    Eigen::MatrixXd infer_positions(const AeModel &model, const Eigen::MatrixXd &features);

    void save_model(const std::filesystem::path &path, const AeModel &model);
    AeModel load_model(const std::filesystem::path &path);
    void write_loss_trace_csv(const std::filesystem::path &path, const std::vector<LossBreakdown> &trace);
} // namespace emschart
