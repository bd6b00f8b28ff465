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

#include "optimizer.hpp"
#include "hashing.hpp"
#include "io.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <numeric>
#include <stdexcept>

namespace emschart
{
    std::size_t SearchSpace::total() const
    {
        std::size_t t = 1;
        for (int k : sizes)
        {
            if (k < 1)
                throw std::invalid_argument("search space: every panel needs at least one codeword");
            t *= static_cast<std::size_t>(k);
        }
        return t;
    }

    std::vector<int> SearchSpace::decode(std::size_t index) const
    {
        if (index >= total())
            throw std::out_of_range("search space: configuration index out of range");
        std::vector<int> out(sizes.size());
        for (std::size_t j = sizes.size(); j-- > 0;)
        {
            out[j] = static_cast<int>(index % static_cast<std::size_t>(sizes[j]));
            index /= static_cast<std::size_t>(sizes[j]);
        }
        return out;
    }

    std::size_t SearchSpace::encode(const std::vector<int> &indices) const
    {
        if (indices.size() != sizes.size())
            throw std::invalid_argument("search space: wrong number of panel indices");
        std::size_t index = 0;
        for (std::size_t j = 0; j < sizes.size(); ++j)
        {
            if (indices[j] < 0 || indices[j] >= sizes[j])
                throw std::invalid_argument("search space: codeword index out of range on panel " + std::to_string(j));
            index = index * static_cast<std::size_t>(sizes[j]) + static_cast<std::size_t>(indices[j]);
        }
        return index;
    }

    namespace
    {
        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        // NaN objectives never win.
        bool better(double a, double b) { return !std::isnan(a) && (std::isnan(b) || a < b); }

        std::size_t argmin(const SearchSpace &space, const std::vector<ConfigResult> &table)
        {
            std::size_t best = 0;
            for (std::size_t i = 1; i < table.size(); ++i)
            {
                const double a = table[i].objective;
                const double b = table[best].objective;
                if (better(a, b) || (a == b && space.encode(table[i].indices) < space.encode(table[best].indices)))
                    best = i;
            }
            return best;
        }
    } // namespace

    SearchResult exhaustive_search(const SearchSpace &space, const Objective &objective, std::size_t budget, unsigned threads)
    {
        const std::size_t total = space.total();
        if (total > budget)
            throw std::invalid_argument("search space has " + std::to_string(total) + " configurations, above the budget of " +
                                        std::to_string(budget) + "; use greedy search");
        const auto t0 = std::chrono::steady_clock::now();
        SearchResult r;
        r.table.resize(total);
        parallel_for(total, threads, [&](std::size_t i) {
            const auto idx = space.decode(i);
            r.table[i] = objective(idx);
            r.table[i].indices = idx;
        });
        r.best = argmin(space, r.table);
        r.wall_time_s = seconds_since(t0);
        return r;
    }

    SearchResult greedy_search(const SearchSpace &space, const Objective &objective, const std::vector<int> &start, int sweeps)
    {
        if (sweeps < 1)
            throw std::invalid_argument("greedy search: sweeps must be at least 1");
        space.encode(start); // validates
        const auto t0 = std::chrono::steady_clock::now();
        SearchResult r;
        std::vector<int> current = start;
        for (int s = 0; s < sweeps; ++s)
            for (std::size_t j = 0; j < space.sizes.size(); ++j)
            {
                std::optional<std::size_t> pick;
                for (int k = 0; k < space.sizes[j]; ++k)
                {
                    auto cand = current;
                    cand[j] = k;
                    ConfigResult row = objective(cand);
                    row.indices = cand;
                    r.table.push_back(std::move(row));
                    if (!pick || better(r.table.back().objective, r.table[*pick].objective))
                        pick = r.table.size() - 1;
                }
                current = r.table[*pick].indices;
            }
        r.best = argmin(space, r.table);
        r.wall_time_s = seconds_since(t0);
        return r;
    }

    ObjectiveCache::ObjectiveCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    std::optional<ConfigResult> ObjectiveCache::load(const std::string &key) const
    {
        const auto path = dir_ / (key + ".json");
        if (!std::filesystem::exists(path))
            return std::nullopt;
        try
        {
            const auto j = nlohmann::json::parse(io::read_file(path));
            ConfigResult r;
            r.objective = io::parse_double(j.at("objective").get<std::string>());
            r.mean = io::parse_double(j.at("mean").get<std::string>());
            r.indices = j.at("indices").get<std::vector<int>>();
            r.cached = true;
            return r;
        }
        catch (const std::exception &)
        {
            return std::nullopt; // unreadable entries are recomputed
        }
    }

    void ObjectiveCache::store(const std::string &key, const ConfigResult &r) const
    {
        nlohmann::ordered_json j;
        j["indices"] = r.indices;
        j["objective"] = io::format_double(r.objective);
        j["mean"] = io::format_double(r.mean);
        io::write_file_atomic(dir_ / (key + ".json"), j.dump() + "\n");
    }

    std::string objective_key(const PipelineContext &ctx, const std::vector<int> &indices, const ObjectiveSpec &spec)
    {
        Fnv1a h;
        h.add(ctx.hash);
        h.add(static_cast<std::uint64_t>(indices.size()));
        for (int k : indices)
            h.add(static_cast<std::uint64_t>(static_cast<std::int64_t>(k)));
        h.add(to_string(spec.method));
        h.add(to_string(spec.metric));
        h.add(spec.alpha);
        return hex64(h.value());
    }

    namespace
    {
        ConfigResult evaluate_with(const PipelineContext &ctx, const std::vector<int> &indices, const ObjectiveSpec &spec,
                                   const ObjectiveCache *cache, unsigned threads)
        {
            const std::string key = cache ? objective_key(ctx, indices, spec) : std::string();
            if (cache)
                if (auto hit = cache->load(key); hit && hit->indices == indices)
                    return *hit;
            const auto t0 = std::chrono::steady_clock::now();
            ConfigResult r;
            r.indices = indices;
            try
            {
                const ChartRun run = run_chart(ctx, codebook_channels(ctx, indices), spec.method, false, threads);
                r.objective = run.report.objective(spec.metric, spec.alpha);
                r.mean = mean(run.report.values(spec.metric));
                if (spec.metric != MetricKind::le)
                    r.mean = -r.mean;
            }
            catch (const std::exception &e)
            {
                std::string tag;
                for (int k : indices)
                    tag += (tag.empty() ? "" : ",") + std::to_string(k);
                throw std::runtime_error("configuration (" + tag + "): " + e.what());
            }
            r.runtime_s = seconds_since(t0);
            if (cache)
                cache->store(key, r);
            return r;
        }
    } // namespace

    ConfigResult evaluate_config(const PipelineContext &ctx, const std::vector<int> &indices, const ObjectiveSpec &spec, const ObjectiveCache *cache)
    {
        return evaluate_with(ctx, indices, spec, cache, 0);
    }

    Objective context_objective(const PipelineContext &ctx, const ObjectiveSpec &spec, const ObjectiveCache *cache)
    {
        return [&ctx, spec, cache](const std::vector<int> &idx) { return evaluate_with(ctx, idx, spec, cache, 1); };
    }

    SearchSpace codebook_space(const PipelineContext &ctx)
    {
        SearchSpace s;
        for (const auto &cb : ctx.codebooks)
            s.sizes.push_back(static_cast<int>(cb.size()));
        return s;
    }

    std::vector<int> specular_indices(const PipelineContext &ctx)
    {
        std::vector<int> idx;
        for (const auto &cb : ctx.codebooks)
            idx.push_back(static_cast<int>(cb.specular_index()));
        return idx;
    }

    EmsConfiguration random_configuration(const Scene &scene, std::uint64_t seed)
    {
        EmsConfiguration c;
        for (std::size_t j = 0; j < scene.panel_count(); ++j)
            c.panels.emplace_back(random_profile(scene.ems_panels[j], mix_seed(seed, j)));
        return c;
    }

    std::vector<Baseline> baseline_configs(const PipelineContext &ctx, std::uint64_t random_seed)
    {
        (void)ctx;
        std::vector<Baseline> b;
        b.push_back({"no_ems", [](const PipelineContext &c) { return c.direct; }});
        b.push_back({"specular", [](const PipelineContext &c) {
                         EmsConfiguration cfg;
                         for (const auto &panel : c.scene.ems_panels)
                             cfg.panels.emplace_back(specular_profile(panel));
                         return configuration_channels(c, cfg);
                     }});
        b.push_back({"random", [random_seed](const PipelineContext &c) { return configuration_channels(c, random_configuration(c.scene, random_seed)); }});
        b.push_back({"idealized_ris", [](const PipelineContext &c) { return idealized_ris_channels(c); }});
        return b;
    }

    void write_objective_table_csv(const std::filesystem::path &path, const SearchResult &r)
    {
        std::string s = "config";
        const std::size_t m = r.table.empty() ? 0 : r.table.front().indices.size();
        for (std::size_t j = 0; j < m; ++j)
            s += ",codeword_panel" + std::to_string(j);
        s += ",objective,mean\n";
        for (std::size_t i = 0; i < r.table.size(); ++i)
        {
            s += std::to_string(i);
            for (int k : r.table[i].indices)
                s += ',' + std::to_string(k);
            s += ',' + io::format_double(r.table[i].objective) + ',' + io::format_double(r.table[i].mean) + '\n';
        }
        io::write_file_atomic(path, s);
    }

    void write_objective_runtime_csv(const std::filesystem::path &path, const SearchResult &r)
    {
        std::string s = "config,runtime_s,cached\n";
        for (std::size_t i = 0; i < r.table.size(); ++i)
            s += std::to_string(i) + ',' + io::format_double(r.table[i].runtime_s) + ',' + (r.table[i].cached ? "1" : "0") + '\n';
        io::write_file_atomic(path, s);
    }
} // namespace emschart
