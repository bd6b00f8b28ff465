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

#include "config.hpp"
#include "optimizer.hpp"
#include "pipeline.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emschart
{
    /// Command-line overrides applied on top of a loaded config.
    struct Overrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<ChartMethod> method;
        std::optional<double> supervision;
        std::optional<double> alpha;
        std::optional<unsigned> threads;
    };

    void apply_overrides(ExperimentConfig &cfg, const Overrides &o);

    /// EMS state used for the channels of a run: no_ems, specular, random,
    /// idealized_ris, best (read from best_config.json in the output
    /// directory) or "codebook:i,j,..." with one codeword per panel.
    struct Scenario
    {
        std::string name = "specular";
        std::vector<int> indices; // codebook scenarios only

        static Scenario parse(const std::string &s);
        std::string to_string() const;
    };

    /// Content hashes of everything a run directory holds, plus stage timings.
    class RunManifest
    {
      public:
        struct Artifact
        {
            std::string path; // relative to the run directory
            std::string sha1; // git blob id
            std::uint64_t bytes = 0;
        };

        /// Loads dir/manifest.json when present.
        explicit RunManifest(std::filesystem::path dir);

        void set_config_hash(const std::string &h) { config_hash_ = h; }
        /// Hashes the file as it is on disk now; replaces an older entry.
        void record(const std::string &relative_path);
        void timing(const std::string &stage, double seconds);
        void save() const;

        const std::vector<Artifact> &artifacts() const { return artifacts_; }
        const std::string &config_hash() const { return config_hash_; }

      private:
        std::filesystem::path dir_;
        std::string config_hash_;
        std::vector<Artifact> artifacts_;
        std::vector<std::pair<std::string, double>> timings_;
    };

    /// Hex SHA-1 of the canonical serialized config.
    std::string config_hash(const ExperimentConfig &cfg);

    /// Scene, seeds, anchors and traced context for a config.
    struct Experiment
    {
        ExperimentConfig cfg;
        BuiltScene built;
        SeedStreams seeds;
        std::vector<int> anchor_indices;
        PipelineContext ctx;
        std::size_t grid_points = 0; // leading test points; the rest lie on the trajectory
    };

    Experiment prepare_experiment(const ExperimentConfig &cfg, bool with_trajectory = false);

    /// Channels of every test point under a scenario. `out_dir` is consulted for "best".
    std::vector<CVector> scenario_channels(const PipelineContext &ctx, const Scenario &s, std::uint64_t random_seed,
                                           const std::filesystem::path &out_dir = {});

    struct SimulateResult
    {
        std::vector<int> point_ids;
        std::vector<double> snr_db;
        Eigen::MatrixXd dissimilarity;
    };

    /// snr.csv, covariances.bin, dissimilarity.bin/.csv, simulation.json.
    SimulateResult cmd_simulate(const ExperimentConfig &cfg, const std::filesystem::path &out, const Scenario &scenario = {});

    struct ChartResult
    {
        ChartMethod method = ChartMethod::tsne;
        std::vector<int> point_ids;
        std::vector<int> anchor_indices;
        Eigen::MatrixXd embedding;
        MetricReport report;
    };

    /// Reads the simulate artifacts in `out`; writes embedding_<m>.csv,
    /// metrics_<m>.csv, summary_<m>.json and a KL or loss trace.
    ChartResult cmd_chart(const ExperimentConfig &cfg, const std::filesystem::path &out);

    /// One scenario scored with the configured chart method.
    struct ScenarioRow
    {
        std::string name;
        std::vector<int> indices;
        double median_snr_db = 0.0;
        double le_mean = 0.0;
        double le_q90 = 0.0;
        double tw_mean = 0.0;
        double ct_mean = 0.0;
        double objective = 0.0;
    };

    ScenarioRow score_scenario(const PipelineContext &ctx, const std::string &name, const std::vector<CVector> &channels, ChartMethod method,
                               MetricKind metric, double alpha);

    struct OptimizeResult
    {
        SearchResult search;
        std::vector<ScenarioRow> baselines; // no_ems, specular, random, idealized_ris
        ScenarioRow best;
    };

    /// objective_table.csv, objective_runtime.csv, best_config.json, baselines.csv.
    /// Objective values are cached under out/cache.
    OptimizeResult cmd_optimize(const ExperimentConfig &cfg, const std::filesystem::path &out);

    struct TrajectoryResult
    {
        Eigen::MatrixXd truth;    // T x 2
        Eigen::MatrixXd estimate; // T x 2
        std::vector<double> le;
        DropoutResult dropout;
    };

    /// Charts the grid together with the trajectory points (never anchors) and
    /// writes trajectory_<scenario>.csv/.svg/.json.
    TrajectoryResult cmd_evaluate_trajectory(const ExperimentConfig &cfg, const std::filesystem::path &out, const Scenario &scenario);

    /// Empirical CDFs (cdf_le.svg, cdf_tw.svg, cdf_ct.svg) over every chart
    /// summary found in the run directories, and table.csv with one row per
    /// metric, method, scenario and supervision.
    void cmd_report(const std::vector<std::filesystem::path> &runs, const std::filesystem::path &out);
} // namespace emschart
