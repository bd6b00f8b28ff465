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

#include "commands.hpp"

#include "errors.hpp"
#include "features.hpp"
#include "io.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace emschart
{
    namespace fs = std::filesystem;
    using json = nlohmann::ordered_json;

    namespace
    {
        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        fs::path require(const fs::path &p)
        {
            if (!fs::exists(p))
                throw MissingArtifactError("missing artifact: expected " + p.string());
            return p;
        }

        json read_json(const fs::path &p)
        {
            try
            {
                return json::parse(io::read_file(require(p)));
            }
            catch (const json::exception &e)
            {
                throw std::runtime_error("malformed JSON in " + p.string() + ": " + e.what());
            }
        }

        void write_json(const fs::path &p, const json &j) { io::write_file_atomic(p, j.dump(2) + "\n"); }

        std::vector<int> grid_candidates(std::size_t n)
        {
            std::vector<int> c(n);
            std::iota(c.begin(), c.end(), 0);
            return c;
        }

        std::string fixed(double v, int digits = 2)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.*f", digits, v);
            return buf;
        }

        std::string label_of(const ExperimentConfig &cfg)
        {
            return to_string(cfg.method.name);
        }
    } // namespace

    void apply_overrides(ExperimentConfig &cfg, const Overrides &o)
    {
        if (o.seed)
            cfg.run.seed = *o.seed;
        if (o.method)
            cfg.method.name = *o.method;
        if (o.supervision)
            cfg.anchors.supervision = *o.supervision;
        if (o.alpha)
            cfg.run.alpha = *o.alpha;
        if (o.threads)
            cfg.run.threads = *o.threads;
        cfg.validate();
    }

    Scenario Scenario::parse(const std::string &s)
    {
        Scenario sc;
        static const std::set<std::string> plain{"no_ems", "specular", "random", "idealized_ris", "best"};
        if (plain.count(s))
        {
            sc.name = s;
            return sc;
        }
        const std::string prefix = "codebook:";
        if (s.rfind(prefix, 0) != 0)
            throw std::invalid_argument("scenario: unknown name '" + s + "'");
        sc.name = "codebook";
        std::stringstream ss(s.substr(prefix.size()));
        std::string tok;
        while (std::getline(ss, tok, ','))
        {
            std::size_t used = 0;
            int k = 0;
            try
            {
                k = std::stoi(tok, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != tok.size() || k < 0)
                throw std::invalid_argument("scenario: bad codeword '" + tok + "' in '" + s + "'");
            sc.indices.push_back(k);
        }
        if (sc.indices.empty())
            throw std::invalid_argument("scenario: no codewords in '" + s + "'");
        return sc;
    }

    std::string Scenario::to_string() const
    {
        if (name != "codebook")
            return name;
        std::string s = "codebook_";
        for (std::size_t j = 0; j < indices.size(); ++j)
            s += (j ? "_" : "") + std::to_string(indices[j]);
        return s;
    }

    RunManifest::RunManifest(fs::path dir) : dir_(std::move(dir))
    {
        const fs::path p = dir_ / "manifest.json";
        if (!fs::exists(p))
            return;
        const json j = read_json(p);
        config_hash_ = j.value("config_hash", "");
        for (const auto &a : j.at("artifacts"))
            artifacts_.push_back({a.at("path").get<std::string>(), a.at("sha1").get<std::string>(), a.at("bytes").get<std::uint64_t>()});
        for (const auto &[k, v] : j.at("timings_s").items())
            timings_.emplace_back(k, v.get<double>());
    }

    void RunManifest::record(const std::string &relative_path)
    {
        const std::string data = io::read_file(dir_ / relative_path);
        Artifact a{relative_path, io::git_blob_sha1(data), data.size()};
        auto it = std::find_if(artifacts_.begin(), artifacts_.end(), [&](const Artifact &x) { return x.path == relative_path; });
        if (it != artifacts_.end())
            *it = a;
        else
            artifacts_.push_back(a);
        std::sort(artifacts_.begin(), artifacts_.end(), [](const Artifact &x, const Artifact &y) { return x.path < y.path; });
    }

    void RunManifest::timing(const std::string &stage, double seconds)
    {
        for (auto &t : timings_)
            if (t.first == stage)
            {
                t.second = seconds;
                return;
            }
        timings_.emplace_back(stage, seconds);
    }

    void RunManifest::save() const
    {
        json j;
        j["config_hash"] = config_hash_;
        j["artifacts"] = json::array();
        for (const auto &a : artifacts_)
            j["artifacts"].push_back({{"path", a.path}, {"sha1", a.sha1}, {"bytes", a.bytes}});
        j["timings_s"] = json::object();
        for (const auto &[k, v] : timings_)
            j["timings_s"][k] = v;
        write_json(dir_ / "manifest.json", j);
    }

    std::string config_hash(const ExperimentConfig &cfg) { return io::git_blob_sha1(serialize_config(cfg)); }

    Experiment prepare_experiment(const ExperimentConfig &cfg, bool with_trajectory)
    {
        Experiment ex;
        ex.cfg = cfg;
        ex.built = build_scene(cfg);
        ex.seeds = derive_seeds(cfg.run.seed);
        ex.grid_points = ex.built.scene.test_points.size();
        if (ex.grid_points == 0)
            throw std::invalid_argument("config: grid has no test points outside obstacles");
        ex.anchor_indices = select_anchor_indices(grid_candidates(ex.grid_points), cfg.anchors.supervision, ex.seeds.anchors);
        if (with_trajectory)
        {
            const int base = cfg.grid.rows * cfg.grid.cols;
            const auto traj = trajectory_points(cfg);
            for (std::size_t i = 0; i < traj.size(); ++i)
            {
                ex.built.scene.test_points.push_back(traj[i]);
                ex.built.point_ids.push_back(base + static_cast<int>(i));
            }
        }
        const unsigned threads = resolve_threads(cfg.run.threads);
        ex.ctx = build_context(ex.built.scene, cfg.radio, ex.seeds.noise, ex.anchor_indices, chart_settings(cfg), cfg.ems.codebook_size, threads,
                               ex.built.point_ids);
        return ex;
    }

    std::vector<CVector> scenario_channels(const PipelineContext &ctx, const Scenario &s, std::uint64_t random_seed, const fs::path &out_dir)
    {
        if (s.name == "no_ems")
            return ctx.direct;
        if (s.name == "idealized_ris")
            return idealized_ris_channels(ctx);
        if (s.name == "random")
            return configuration_channels(ctx, random_configuration(ctx.scene, random_seed));
        if (s.name == "specular")
            return codebook_channels(ctx, specular_indices(ctx));
        if (s.name == "codebook")
            return codebook_channels(ctx, s.indices);
        if (s.name == "best")
        {
            const json j = read_json(out_dir / "best_config.json");
            return codebook_channels(ctx, j.at("indices").get<std::vector<int>>());
        }
        throw std::invalid_argument("scenario: unknown name '" + s.name + "'");
    }

    SimulateResult cmd_simulate(const ExperimentConfig &cfg, const fs::path &out, const Scenario &scenario)
    {
        io::DirectoryLock lock(out);
        const auto t0 = std::chrono::steady_clock::now();
        Experiment ex = prepare_experiment(cfg);
        const PipelineContext &ctx = ex.ctx;
        const auto channels = scenario_channels(ctx, scenario, ex.seeds.random_phase, out);

        SimulateResult r;
        r.point_ids = ctx.point_ids;
        std::string snr = "point_id,x_m,y_m,snr_db\n";
        for (std::size_t u = 0; u < ctx.size(); ++u)
        {
            r.snr_db.push_back(snr_db(channels[u], ctx.radio));
            snr += std::to_string(ctx.point_ids[u]) + ',' + io::format_double(ctx.truth(static_cast<Eigen::Index>(u), 0)) + ',' +
                   io::format_double(ctx.truth(static_cast<Eigen::Index>(u), 1)) + ',' + io::format_double(r.snr_db.back()) + '\n';
        }
        auto features = estimate_features(ctx, channels);
        std::vector<CMatrix> logs;
        for (const auto &f : features)
            logs.push_back(*f.logR);
        const DissimilarityMatrix d = dissimilarity_from_logs(logs);
        r.dissimilarity = d.D;

        io::write_file_atomic(out / "snr.csv", snr);
        write_covariances_bin(out / "covariances.bin", features);
        write_dissimilarity_bin(out / "dissimilarity.bin", d);
        write_dissimilarity_csv(out / "dissimilarity.csv", d);
        json sim;
        sim["config_hash"] = config_hash(cfg);
        sim["scenario"] = scenario.to_string();
        sim["points"] = ctx.size();
        write_json(out / "simulation.json", sim);

        RunManifest m(out);
        m.set_config_hash(config_hash(cfg));
        for (const char *f : {"snr.csv", "covariances.bin", "dissimilarity.bin", "dissimilarity.csv", "simulation.json"})
            m.record(f);
        m.timing("simulate", seconds_since(t0));
        m.save();
        return r;
    }

    ChartResult cmd_chart(const ExperimentConfig &cfg, const fs::path &out)
    {
        const fs::path cov_path = require(out / "covariances.bin");
        const fs::path dis_path = require(out / "dissimilarity.bin");
        const json sim = read_json(out / "simulation.json");
        io::DirectoryLock lock(out);
        const auto t0 = std::chrono::steady_clock::now();

        const BuiltScene built = build_scene(cfg);
        auto features = read_covariances_bin(cov_path);
        const DissimilarityMatrix d = read_dissimilarity_bin(dis_path);
        const std::size_t n = built.scene.test_points.size();
        if (features.size() != n || static_cast<std::size_t>(d.size()) != n)
            throw std::invalid_argument("chart: artifacts in " + out.string() + " hold " + std::to_string(features.size()) +
                                        " points, the config defines " + std::to_string(n));
        for (std::size_t u = 0; u < n; ++u)
            if (features[u].point_id != built.point_ids[u])
                throw std::invalid_argument("chart: artifact point ids do not match the config grid");

        const SeedStreams seeds = derive_seeds(cfg.run.seed);
        ChartResult r;
        r.method = cfg.method.name;
        r.point_ids = built.point_ids;
        r.anchor_indices = select_anchor_indices(grid_candidates(n), cfg.anchors.supervision, seeds.anchors);
        Eigen::MatrixXd truth(static_cast<Eigen::Index>(n), 2);
        for (std::size_t u = 0; u < n; ++u)
            truth.row(static_cast<Eigen::Index>(u)) = built.scene.test_points[u].head<2>().transpose();
        std::vector<bool> anchored(n, false);
        for (int i : r.anchor_indices)
            anchored[static_cast<std::size_t>(i)] = true;

        std::vector<CMatrix> logs;
        for (auto &f : features)
            logs.push_back(ensure_log(f));
        const ChartSettings settings = chart_settings(cfg);
        ChartFit fit = fit_chart(d.D, logs, make_anchor_set(r.anchor_indices, truth), settings, r.method);
        r.embedding = fit.embedding;
        r.report = evaluate_chart(d.D, r.embedding, truth, anchored, r.point_ids, settings.kappa);

        const std::string m = label_of(cfg);
        Embedding e;
        e.Z = r.embedding;
        e.anchored = anchored;
        write_embedding_csv(out / ("embedding_" + m + ".csv"), e, r.point_ids);
        write_metrics_csv(out / ("metrics_" + m + ".csv"), r.report);
        json summary;
        summary["method"] = m;
        summary["scenario"] = sim.at("scenario");
        summary["supervision"] = cfg.anchors.supervision;
        summary["seed"] = cfg.run.seed;
        summary["anchors"] = r.anchor_indices.size();
        summary["metrics"] = json::parse(summary_json(r.report));
        write_json(out / ("summary_" + m + ".json"), summary);

        RunManifest man(out);
        man.set_config_hash(config_hash(cfg));
        std::vector<std::string> files{"embedding_" + m + ".csv", "metrics_" + m + ".csv", "summary_" + m + ".json"};
        if (fit.tsne)
        {
            write_kl_trace_csv(out / "kl_trace_tsne.csv", *fit.tsne);
            files.push_back("kl_trace_tsne.csv");
        }
        if (fit.ae)
        {
            write_loss_trace_csv(out / "loss_trace_ae.csv", fit.ae->trace);
            save_model(out / "model_ae.bin", fit.ae->model);
            files.push_back("loss_trace_ae.csv");
            files.push_back("model_ae.bin");
        }
        for (const auto &f : files)
            man.record(f);
        man.timing("chart_" + m, seconds_since(t0));
        man.save();
        return r;
    }

    ScenarioRow score_scenario(const PipelineContext &ctx, const std::string &name, const std::vector<CVector> &channels, ChartMethod method,
                               MetricKind metric, double alpha)
    {
        const ChartRun run = run_chart(ctx, channels, method);
        ScenarioRow row;
        row.name = name;
        row.median_snr_db = median_snr_db(run.snr_db);
        row.le_mean = mean(run.report.le);
        row.le_q90 = quantile(run.report.le, 0.9);
        row.tw_mean = mean(run.report.tw);
        row.ct_mean = mean(run.report.ct);
        row.objective = run.report.objective(metric, alpha);
        return row;
    }

    namespace
    {
        json row_json(const ScenarioRow &r)
        {
            json j;
            j["name"] = r.name;
            j["median_snr_db"] = r.median_snr_db;
            j["le_mean_m"] = r.le_mean;
            j["le_q90_m"] = r.le_q90;
            j["tw_mean"] = r.tw_mean;
            j["ct_mean"] = r.ct_mean;
            j["objective"] = r.objective;
            return j;
        }

        std::string rows_csv(const std::vector<ScenarioRow> &rows)
        {
            std::string s = "scenario,median_snr_db,le_mean_m,le_q90_m,tw_mean,ct_mean,objective\n";
            for (const auto &r : rows)
                s += r.name + ',' + io::format_double(r.median_snr_db) + ',' + io::format_double(r.le_mean) + ',' + io::format_double(r.le_q90) + ',' +
                     io::format_double(r.tw_mean) + ',' + io::format_double(r.ct_mean) + ',' + io::format_double(r.objective) + '\n';
            return s;
        }
    } // namespace

    OptimizeResult cmd_optimize(const ExperimentConfig &cfg, const fs::path &out)
    {
        io::DirectoryLock lock(out);
        const auto t0 = std::chrono::steady_clock::now();
        Experiment ex = prepare_experiment(cfg);
        const PipelineContext &ctx = ex.ctx;
        if (ctx.panel_count() == 0)
            throw std::invalid_argument("optimize: the scene has no EMS panels");

        ObjectiveSpec spec;
        spec.metric = cfg.run.metric;
        spec.alpha = cfg.run.alpha;
        spec.method = cfg.method.name;
        const ObjectiveCache cache(out / "cache");
        const SearchSpace space = codebook_space(ctx);

        OptimizeResult r;
        if (cfg.ems.search == "greedy")
            r.search = greedy_search(space, context_objective(ctx, spec, &cache), specular_indices(ctx), cfg.ems.sweeps);
        else
            r.search = exhaustive_search(space, context_objective(ctx, spec, &cache), cfg.ems.budget, resolve_threads(cfg.run.threads));

        for (const auto &b : baseline_configs(ctx, ex.seeds.random_phase))
            r.baselines.push_back(score_scenario(ctx, b.name, b.channels(ctx), spec.method, spec.metric, spec.alpha));
        const auto &best = r.search.best_row();
        r.best = score_scenario(ctx, "best", codebook_channels(ctx, best.indices), spec.method, spec.metric, spec.alpha);
        r.best.indices = best.indices;

        write_objective_table_csv(out / "objective_table.csv", r.search);
        write_objective_runtime_csv(out / "objective_runtime.csv", r.search);
        io::write_file_atomic(out / "baselines.csv", rows_csv(r.baselines));
        json bj;
        bj["indices"] = best.indices;
        bj["codewords"] = json::array();
        for (std::size_t j = 0; j < best.indices.size(); ++j)
            bj["codewords"].push_back(ctx.codebooks[j].profiles[static_cast<std::size_t>(best.indices[j])].label.to_string());
        bj["config_index"] = space.encode(best.indices);
        bj["method"] = to_string(spec.method);
        bj["metric"] = to_string(spec.metric);
        bj["alpha"] = spec.alpha;
        bj["search"] = cfg.ems.search;
        bj["evaluations"] = r.search.table.size();
        bj["scores"] = row_json(r.best);
        write_json(out / "best_config.json", bj);

        RunManifest man(out);
        man.set_config_hash(config_hash(cfg));
        for (const char *f : {"objective_table.csv", "objective_runtime.csv", "baselines.csv", "best_config.json"})
            man.record(f);
        man.timing("optimize_" + to_string(spec.method), seconds_since(t0));
        man.save();
        return r;
    }

    namespace
    {
        // Maps scene metres to SVG pixels with y pointing up.
        struct Frame
        {
            double x0, y0, x1, y1, scale, margin;

            double px(double x) const { return margin + (x - x0) * scale; }
            double py(double y) const { return margin + (y1 - y) * scale; }
            double width() const { return 2 * margin + (x1 - x0) * scale; }
            double height() const { return 2 * margin + (y1 - y0) * scale; }
        };

        std::string trajectory_svg(const ExperimentConfig &cfg, const TrajectoryResult &t, double threshold)
        {
            const Frame f{cfg.grid.region_min.x(), cfg.grid.region_min.y(), cfg.grid.region_max.x(), cfg.grid.region_max.y(), 6.0, 20.0};
            std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(f.width(), 0) + "\" height=\"" + fixed(f.height(), 0) + "\">\n";
            s += "<rect x=\"" + fixed(f.px(f.x0)) + "\" y=\"" + fixed(f.py(f.y1)) + "\" width=\"" + fixed(f.px(f.x1) - f.px(f.x0)) + "\" height=\"" +
                 fixed(f.py(f.y0) - f.py(f.y1)) + "\" fill=\"white\" stroke=\"black\"/>\n";
            for (const auto &b : cfg.scene.obstacles)
            {
                const double x0 = std::max(b.min_corner.x(), f.x0), x1 = std::min(b.max_corner.x(), f.x1);
                const double y0 = std::max(b.min_corner.y(), f.y0), y1 = std::min(b.max_corner.y(), f.y1);
                if (x1 <= x0 || y1 <= y0)
                    continue;
                s += "<rect x=\"" + fixed(f.px(x0)) + "\" y=\"" + fixed(f.py(y1)) + "\" width=\"" + fixed(f.px(x1) - f.px(x0)) + "\" height=\"" +
                     fixed(f.py(y0) - f.py(y1)) + "\" fill=\"#bbbbbb\"/>\n";
            }
            s += "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"2\" points=\"";
            for (Eigen::Index i = 0; i < t.truth.rows(); ++i)
                s += (i ? " " : "") + fixed(f.px(t.truth(i, 0))) + "," + fixed(f.py(t.truth(i, 1)));
            s += "\"/>\n";
            for (Eigen::Index i = 0; i < t.estimate.rows(); ++i)
            {
                const bool bad = t.dropout.flags[static_cast<std::size_t>(i)];
                s += "<circle cx=\"" + fixed(f.px(t.estimate(i, 0))) + "\" cy=\"" + fixed(f.py(t.estimate(i, 1))) + "\" r=\"3\" fill=\"none\" stroke=\"" +
                     (bad ? "red" : "black") + "\"/>\n";
            }
            s += "<text x=\"" + fixed(f.margin) + "\" y=\"14\" font-size=\"12\">dropout (&gt;" + fixed(threshold, 1) + " m): " +
                 fixed(100.0 * t.dropout.fraction, 1) + "%</text>\n";
            s += "</svg>\n";
            return s;
        }
    } // namespace

    TrajectoryResult cmd_evaluate_trajectory(const ExperimentConfig &cfg, const fs::path &out, const Scenario &scenario)
    {
        io::DirectoryLock lock(out);
        const auto t0 = std::chrono::steady_clock::now();
        Experiment ex = prepare_experiment(cfg, true);
        PipelineContext &ctx = ex.ctx;
        for (std::size_t u = 0; u < ex.grid_points; ++u)
            ctx.excluded[u] = true;
        const auto channels = scenario_channels(ctx, scenario, ex.seeds.random_phase, out);
        const ChartRun run = run_chart(ctx, channels, cfg.method.name);

        const auto g = static_cast<Eigen::Index>(ex.grid_points);
        const Eigen::Index tn = static_cast<Eigen::Index>(ctx.size()) - g;
        TrajectoryResult r;
        r.truth = ctx.truth.bottomRows(tn);
        r.estimate = run.embedding.bottomRows(tn);
        r.le = localization_error(r.estimate, r.truth);
        r.dropout = trajectory_dropout(r.estimate, r.truth, cfg.trajectory.threshold_m);

        const std::string tag = scenario.to_string() + "_" + label_of(cfg);
        std::string csv = "index,point_id,x_m,y_m,est_x_m,est_y_m,le_m,dropout\n";
        for (Eigen::Index i = 0; i < tn; ++i)
            csv += std::to_string(i) + ',' + std::to_string(ctx.point_ids[static_cast<std::size_t>(g + i)]) + ',' + io::format_double(r.truth(i, 0)) +
                   ',' + io::format_double(r.truth(i, 1)) + ',' + io::format_double(r.estimate(i, 0)) + ',' + io::format_double(r.estimate(i, 1)) +
                   ',' + io::format_double(r.le[static_cast<std::size_t>(i)]) + ',' + (r.dropout.flags[static_cast<std::size_t>(i)] ? "1" : "0") +
                   '\n';
        io::write_file_atomic(out / ("trajectory_" + tag + ".csv"), csv);
        io::write_file_atomic(out / ("trajectory_" + tag + ".svg"), trajectory_svg(cfg, r, cfg.trajectory.threshold_m));
        json j;
        j["scenario"] = scenario.to_string();
        j["method"] = label_of(cfg);
        j["supervision"] = cfg.anchors.supervision;
        j["points"] = tn;
        j["threshold_m"] = cfg.trajectory.threshold_m;
        j["dropout_fraction"] = r.dropout.fraction;
        j["le_mean_m"] = mean(r.le);
        j["le_q90_m"] = quantile(r.le, 0.9);
        write_json(out / ("trajectory_" + tag + ".json"), j);

        RunManifest man(out);
        man.set_config_hash(config_hash(cfg));
        for (const char *ext : {".csv", ".svg", ".json"})
            man.record("trajectory_" + tag + ext);
        man.timing("trajectory_" + tag, seconds_since(t0));
        man.save();
        return r;
    }

    namespace
    {
        struct Series
        {
            std::string method, scenario;
            double supervision = 0.0;
            std::map<std::string, std::vector<double>> values; // le_m, tw, ct
            json summary;

            std::string label() const { return scenario + " / " + method + " / " + fixed(100.0 * supervision, 0) + "%"; }
        };

        const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

        std::string cdf_svg(const std::vector<Series> &series, const std::string &column, const std::string &title)
        {
            double lo = 0.0, hi = 1.0;
            bool first = true;
            for (const auto &s : series)
                for (double v : s.values.at(column))
                {
                    lo = first ? v : std::min(lo, v);
                    hi = first ? v : std::max(hi, v);
                    first = false;
                }
            if (column == "le_m")
                lo = 0.0;
            if (hi <= lo)
                hi = lo + 1.0;
            const double w = 480, h = 320, m = 50;
            auto px = [&](double v) { return m + (v - lo) / (hi - lo) * w; };
            auto py = [&](double p) { return m + (1.0 - p) * h; };
            const double legend = 18.0 * static_cast<double>(series.size());
            std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(w + 2 * m, 0) + "\" height=\"" + fixed(h + 2 * m + legend, 0) + "\">\n";
            s += "<text x=\"" + fixed(m, 0) + "\" y=\"30\" font-size=\"14\">" + title + "</text>\n";
            s += "<rect x=\"" + fixed(m, 0) + "\" y=\"" + fixed(m, 0) + "\" width=\"" + fixed(w, 0) + "\" height=\"" + fixed(h, 0) +
                 "\" fill=\"none\" stroke=\"black\"/>\n";
            for (int k = 0; k <= 4; ++k)
            {
                const double v = lo + (hi - lo) * k / 4.0;
                s += "<text x=\"" + fixed(px(v)) + "\" y=\"" + fixed(m + h + 16) + "\" font-size=\"10\" text-anchor=\"middle\">" + fixed(v, 2) + "</text>\n";
                s += "<text x=\"" + fixed(m - 6) + "\" y=\"" + fixed(py(k / 4.0) + 4) + "\" font-size=\"10\" text-anchor=\"end\">" + fixed(k / 4.0, 2) +
                     "</text>\n";
            }
            for (std::size_t i = 0; i < series.size(); ++i)
            {
                std::vector<double> v = series[i].values.at(column);
                std::sort(v.begin(), v.end());
                const char *colour = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
                std::string pts = fixed(px(lo)) + "," + fixed(py(0.0));
                const double n = static_cast<double>(v.size());
                for (std::size_t k = 0; k < v.size(); ++k)
                {
                    pts += " " + fixed(px(v[k])) + "," + fixed(py(k / n));
                    pts += " " + fixed(px(v[k])) + "," + fixed(py((k + 1) / n));
                }
                pts += " " + fixed(px(hi)) + "," + fixed(py(1.0));
                s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
                const double ly = m + h + 36 + 18.0 * static_cast<double>(i);
                s += "<line x1=\"" + fixed(m) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" + fixed(m + 20) + "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + colour +
                     "\" stroke-width=\"2\"/>\n";
                s += "<text x=\"" + fixed(m + 26) + "\" y=\"" + fixed(ly) + "\" font-size=\"11\">" + series[i].label() + "</text>\n";
            }
            s += "</svg>\n";
            return s;
        }
    } // namespace

    void cmd_report(const std::vector<fs::path> &runs, const fs::path &out)
    {
        if (runs.empty())
            throw std::invalid_argument("report: at least one run directory is required");
        std::vector<Series> series;
        for (const auto &dir : runs)
        {
            if (!fs::is_directory(dir))
                throw MissingArtifactError("report: run directory not found: " + dir.string());
            std::vector<fs::path> summaries;
            for (const auto &entry : fs::directory_iterator(dir))
            {
                const std::string name = entry.path().filename().string();
                if (name.rfind("summary_", 0) == 0 && entry.path().extension() == ".json")
                    summaries.push_back(entry.path());
            }
            std::sort(summaries.begin(), summaries.end());
            for (const auto &p : summaries)
            {
                const json j = read_json(p);
                Series s;
                try
                {
                    s.method = j.at("method").get<std::string>();
                    s.scenario = j.at("scenario").get<std::string>();
                    s.supervision = j.at("supervision").get<double>();
                    s.summary = j.at("metrics");
                    for (const char *k : {"le_m", "tw", "ct"})
                        (void)s.summary.at(k).at("mean"), (void)s.summary.at(k).at("q90");
                }
                catch (const json::exception &e)
                {
                    throw std::invalid_argument("report: schema mismatch in " + p.string() + ": " + e.what());
                }
                const io::CsvTable t = io::read_csv(require(dir / ("metrics_" + s.method + ".csv")));
                if (t.header != io::CsvRow{"point_id", "le_m", "tw", "ct"})
                    throw std::invalid_argument("report: schema mismatch in " + (dir / ("metrics_" + s.method + ".csv")).string());
                for (const char *k : {"le_m", "tw", "ct"})
                {
                    const std::size_t c = t.column(k);
                    auto &v = s.values[k];
                    for (const auto &row : t.rows)
                        v.push_back(io::parse_double(row[c]));
                }
                for (const auto &o : series)
                    if (o.method == s.method && o.scenario == s.scenario && o.supervision == s.supervision)
                        throw std::invalid_argument("report: two runs share method " + s.method + ", scenario " + s.scenario + " and supervision");
                series.push_back(std::move(s));
            }
        }
        if (series.empty())
            throw MissingArtifactError("report: no chart summaries found in the given run directories");

        std::sort(series.begin(), series.end(), [](const Series &a, const Series &b) {
            return std::tie(a.scenario, a.method, a.supervision) < std::tie(b.scenario, b.method, b.supervision);
        });
        fs::create_directories(out);
        io::write_file_atomic(out / "cdf_le.svg", cdf_svg(series, "le_m", "Empirical CDF of localization error [m]"));
        io::write_file_atomic(out / "cdf_tw.svg", cdf_svg(series, "tw", "Empirical CDF of trustworthiness"));
        io::write_file_atomic(out / "cdf_ct.svg", cdf_svg(series, "ct", "Empirical CDF of continuity"));
        std::string table = "metric,method,scenario,supervision,mean,q90\n";
        for (const char *k : {"le_m", "tw", "ct"})
            for (const auto &s : series)
                table += std::string(k) + ',' + s.method + ',' + s.scenario + ',' + io::format_double(s.supervision) + ',' +
                         io::format_double(s.summary.at(k).at("mean").get<double>()) + ',' + io::format_double(s.summary.at(k).at("q90").get<double>()) +
                         '\n';
        io::write_file_atomic(out / "table.csv", table);
    }
} // namespace emschart
