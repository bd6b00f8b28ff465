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

#include "pipeline.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace emschart
{
    /// Cartesian product of per-panel codebooks, enumerated lexicographically
    /// with panel 0 as the most significant digit.
    struct SearchSpace
    {
        std::vector<int> sizes;

        std::size_t total() const;
        std::vector<int> decode(std::size_t index) const;
        std::size_t encode(const std::vector<int> &indices) const;
    };

    struct ObjectiveSpec
    {
        MetricKind metric = MetricKind::le;
        double alpha = 0.9;
        ChartMethod method = ChartMethod::tsne;
    };

    struct ConfigResult
    {
        std::vector<int> indices;
        double objective = 0.0; // alpha-quantile of LE, -TW or -CT
        double mean = 0.0;      // mean of the same signed metric
        double runtime_s = 0.0;
        bool cached = false;
    };

    struct SearchResult
    {
        std::vector<ConfigResult> table;
        std::size_t best = 0; // row of the minimum; ties go to the smallest configuration index
        double wall_time_s = 0.0;

        const ConfigResult &best_row() const { return table.at(best); }
    };

    using Objective = std::function<ConfigResult(const std::vector<int> &)>;

    /// Evaluates every configuration. Throws if the space exceeds `budget`.
    SearchResult exhaustive_search(const SearchSpace &space, const Objective &objective, std::size_t budget = 1024, unsigned threads = 1);

    /// Coordinate descent starting from `start`; each sweep tries every
    /// codeword of every panel in turn. sweeps * sum(K_j) evaluations.
    SearchResult greedy_search(const SearchSpace &space, const Objective &objective, const std::vector<int> &start, int sweeps = 1);

    /// Objective values stored per configuration under a content key.
    class ObjectiveCache
    {
      public:
        explicit ObjectiveCache(std::filesystem::path dir);

        std::optional<ConfigResult> load(const std::string &key) const;
        void store(const std::string &key, const ConfigResult &r) const;

      private:
        std::filesystem::path dir_;
    };

    /// Cache key of one configuration under a context and objective.
    std::string objective_key(const PipelineContext &ctx, const std::vector<int> &indices, const ObjectiveSpec &spec);

    /// Runs the full pipeline for a codebook configuration.
    ConfigResult evaluate_config(const PipelineContext &ctx, const std::vector<int> &indices, const ObjectiveSpec &spec,
                                 const ObjectiveCache *cache = nullptr);

    /// Objective bound to a context; evaluations use a single thread so that
    /// configurations can run side by side.
    Objective context_objective(const PipelineContext &ctx, const ObjectiveSpec &spec, const ObjectiveCache *cache = nullptr);

    SearchSpace codebook_space(const PipelineContext &ctx);

    /// Specular codeword on every panel.
    std::vector<int> specular_indices(const PipelineContext &ctx);

    struct Baseline
    {
        std::string name;
        std::function<std::vector<CVector>(const PipelineContext &)> channels;
    };

    /// no_ems, specular, random(seed), idealized_ris.
    std::vector<Baseline> baseline_configs(const PipelineContext &ctx, std::uint64_t random_seed);

    /// Uniform random profile per panel.
    EmsConfiguration random_configuration(const Scene &scene, std::uint64_t seed);

    void write_objective_table_csv(const std::filesystem::path &path, const SearchResult &r);
    void write_objective_runtime_csv(const std::filesystem::path &path, const SearchResult &r);
} // namespace emschart
