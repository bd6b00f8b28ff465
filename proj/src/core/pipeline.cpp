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

#include "pipeline.hpp"
#include "hashing.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace emschart
{
    std::string to_string(ChartMethod m) { return m == ChartMethod::ae ? "ae" : "tsne"; }

    ChartMethod method_from_string(const std::string &s)
    {
        if (s == "tsne")
            return ChartMethod::tsne;
        if (s == "ae")
            return ChartMethod::ae;
        throw std::invalid_argument("unknown method '" + s + "' (expected tsne or ae)");
    }

    MlpSpec AeTopology::spec(int input_dim, int latent_dim) const
    {
        MlpSpec s;
        s.encoder_widths.push_back(input_dim);
        s.encoder_widths.insert(s.encoder_widths.end(), hidden_widths.begin(), hidden_widths.end());
        s.encoder_widths.push_back(latent_dim);
        s.encoder_activations = hidden_activations;
        s.validate();
        return s;
    }

    std::vector<int> select_anchor_indices(const std::vector<int> &candidates, double fraction, std::uint64_t seed)
    {
        if (!(fraction > 0.0 && fraction <= 1.0))
            throw std::invalid_argument("anchors: supervision fraction must lie in (0, 1]");
        const double exact = fraction * static_cast<double>(candidates.size());
        const auto count = std::min(candidates.size(), static_cast<std::size_t>(std::ceil(exact - 1e-9)));
        std::vector<int> pool = candidates;
        Rng rng(seed);
        for (std::size_t i = 0; i < count; ++i)
            std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        pool.resize(count);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    AnchorSet make_anchor_set(const std::vector<int> &indices, const Eigen::MatrixXd &truth)
    {
        AnchorSet a;
        a.indices = indices;
        a.coordinates.resize(static_cast<Eigen::Index>(indices.size()), truth.cols());
        for (std::size_t i = 0; i < indices.size(); ++i)
        {
            if (indices[i] < 0 || indices[i] >= truth.rows())
                throw std::invalid_argument("anchors: index " + std::to_string(indices[i]) + " out of range");
            a.coordinates.row(static_cast<Eigen::Index>(i)) = truth.row(indices[i]);
        }
        return a;
    }

    namespace
    {
        std::optional<Path> strongest(const PathSet &set, const ArrayGeometry &rx, const ArrayGeometry &tx)
        {
            std::optional<Path> best;
            double best_w = 0.0;
            for (const auto &p : set.paths)
            {
                const double w = std::abs(p.gain) * element_pattern(rx, unit_vector(p.arrival)) * element_pattern(tx, unit_vector(p.departure));
                if (w > best_w)
                {
                    best_w = w;
                    best = p;
                }
            }
            return best;
        }

        // Reflected terms of one profile for every user, as one matrix product.
        std::vector<CVector> reflected_terms(const CMatrix &outgoing, const PhaseProfile &profile, const std::vector<std::vector<CVector>> &incident,
                                             std::size_t panel)
        {
            const auto L = outgoing.cols();
            if (static_cast<Eigen::Index>(profile.size()) != L)
                throw std::invalid_argument("profile size does not match panel " + std::to_string(panel));
            const auto n = static_cast<Eigen::Index>(incident.size());
            CVector rot(L);
            for (Eigen::Index l = 0; l < L; ++l)
            {
                const double phi = profile.phases[static_cast<std::size_t>(l)];
                rot[l] = Complex(std::cos(phi), std::sin(phi));
            }
            CMatrix E(L, n);
            for (Eigen::Index u = 0; u < n; ++u)
                E.col(u) = rot.cwiseProduct(incident[static_cast<std::size_t>(u)][panel]);
            const CMatrix T = outgoing * E;
            std::vector<CVector> out(static_cast<std::size_t>(n));
            for (Eigen::Index u = 0; u < n; ++u)
                out[static_cast<std::size_t>(u)] = T.col(u);
            return out;
        }

        std::uint64_t context_hash(const PipelineContext &ctx, int codebook_size)
        {
            Fnv1a h;
            h.add(scene_hash(ctx.scene));
            h.add(ctx.radio.tx_power_dbm);
            h.add(ctx.radio.noise_power_dbm);
            h.add(ctx.radio.bandwidth_hz);
            h.add(static_cast<std::uint64_t>(ctx.radio.snapshots));
            h.add(ctx.noise_seed);
            for (int id : ctx.point_ids)
                h.add(static_cast<std::uint64_t>(id));
            h.add(static_cast<std::uint64_t>(ctx.anchors.size()));
            for (int i : ctx.anchors.indices)
                h.add(static_cast<std::uint64_t>(i));
            const auto &t = ctx.chart.tsne;
            h.add(t.perplexity);
            h.add(static_cast<std::uint64_t>(t.iterations));
            h.add(t.learning_rate);
            h.add(t.momentum);
            h.add(t.exaggeration);
            h.add(static_cast<std::uint64_t>(t.exaggeration_iters));
            h.add(static_cast<std::uint64_t>(t.latent_dim));
            h.add(t.seed);
            h.add(t.init_scale);
            h.add(t.monotone_fraction);
            const auto &a = ctx.chart.ae;
            h.add(a.alpha);
            h.add(a.beta);
            h.add(a.gamma);
            h.add(a.eta);
            h.add(a.learning_rate);
            h.add(static_cast<std::uint64_t>(a.batch_size));
            h.add(static_cast<std::uint64_t>(a.epochs));
            h.add(a.seed);
            h.add(static_cast<std::uint64_t>(a.normalize_labels));
            for (int w : ctx.chart.topology.hidden_widths)
                h.add(static_cast<std::uint64_t>(w));
            for (auto act : ctx.chart.topology.hidden_activations)
                h.add(to_string(act));
            h.add(static_cast<std::uint64_t>(ctx.chart.kappa));
            h.add(static_cast<std::uint64_t>(codebook_size));
            for (bool e : ctx.excluded)
                h.add(static_cast<std::uint64_t>(e));
            return h.value();
        }
    } // namespace

    PipelineContext build_context(const Scene &scene, const RadioParams &radio, std::uint64_t noise_seed, const std::vector<int> &anchor_indices,
                                  const ChartSettings &chart, int codebook_size, unsigned threads, std::vector<int> point_ids)
    {
        radio.validate();
        validate(scene.bs);
        for (const auto &p : scene.ems_panels)
            validate(p);
        const std::size_t n = scene.test_points.size();
        if (n == 0)
            throw std::invalid_argument("context: scene has no test points");
        if (point_ids.empty())
        {
            point_ids.resize(n);
            std::iota(point_ids.begin(), point_ids.end(), 0);
        }
        if (point_ids.size() != n)
            throw std::invalid_argument("context: point id count does not match test points");

        PipelineContext ctx;
        ctx.scene = scene;
        ctx.radio = radio;
        ctx.noise_seed = noise_seed;
        ctx.point_ids = std::move(point_ids);
        ctx.chart = chart;
        ctx.threads = threads;
        ctx.truth.resize(static_cast<Eigen::Index>(n), 2);
        for (std::size_t u = 0; u < n; ++u)
            ctx.truth.row(static_cast<Eigen::Index>(u)) = scene.test_points[u].head<2>().transpose();
        ctx.anchors = make_anchor_set(anchor_indices, ctx.truth);
        ctx.anchored.assign(n, false);
        for (int i : anchor_indices)
            ctx.anchored[static_cast<std::size_t>(i)] = true;
        ctx.excluded.assign(n, false);

        const double lambda = scene.wavelength();
        const std::size_t m = scene.panel_count();
        for (std::size_t j = 0; j < m; ++j)
        {
            const auto &panel = scene.ems_panels[j];
            const PathSet out = trace_paths(scene, panel.origin, scene.bs);
            ctx.outgoing.push_back(aggregate_narrowband(out, scene.bs, panel, lambda));
            ctx.strongest_outgoing.push_back(strongest(out, scene.bs, panel));
        }

        ctx.direct.resize(n);
        ctx.incident.resize(n);
        ctx.strongest_incident.resize(n);
        parallel_for(n, threads, [&](std::size_t u) {
            const Vec3 &ue = scene.test_points[u];
            const ArrayGeometry ue_geom = point_array(ue);
            try
            {
                ctx.direct[u] = aggregate_narrowband(trace_paths(scene, ue, scene.bs), scene.bs, ue_geom, lambda).col(0);
                for (std::size_t j = 0; j < m; ++j)
                {
                    const auto &panel = scene.ems_panels[j];
                    const PathSet in = trace_paths(scene, ue, panel);
                    ctx.incident[u].push_back(aggregate_narrowband(in, panel, ue_geom, lambda).col(0));
                    ctx.strongest_incident[u].push_back(strongest(in, panel, ue_geom));
                }
            }
            catch (const std::exception &e)
            {
                throw std::invalid_argument("test point " + std::to_string(ctx.point_ids[u]) + ": " + e.what());
            }
        });

        if (codebook_size > 0)
        {
            ctx.terms.resize(m);
            for (std::size_t j = 0; j < m; ++j)
            {
                ctx.codebooks.push_back(build_codebook(scene.ems_panels[j], codebook_size, static_cast<int>(j)));
                const auto &cb = ctx.codebooks.back();
                ctx.terms[j].resize(cb.size());
                parallel_for(cb.size(), threads, [&](std::size_t k) { ctx.terms[j][k] = reflected_terms(ctx.outgoing[j], cb.profiles[k], ctx.incident, j); });
            }
        }
        ctx.hash = context_hash(ctx, codebook_size);
        return ctx;
    }

    std::vector<CVector> codebook_channels(const PipelineContext &ctx, const std::vector<int> &indices)
    {
        if (indices.size() != ctx.panel_count())
            throw std::invalid_argument("codebook configuration has " + std::to_string(indices.size()) + " entries, scene has " +
                                        std::to_string(ctx.panel_count()) + " panels");
        std::vector<CVector> h = ctx.direct;
        for (std::size_t j = 0; j < indices.size(); ++j)
        {
            const int k = indices[j];
            if (k < 0)
                continue;
            if (j >= ctx.terms.size() || static_cast<std::size_t>(k) >= ctx.terms[j].size())
                throw std::invalid_argument("codeword " + std::to_string(k) + " out of range for panel " + std::to_string(j));
            for (std::size_t u = 0; u < h.size(); ++u)
                h[u] += ctx.terms[j][static_cast<std::size_t>(k)][u];
        }
        return h;
    }

    std::vector<CVector> configuration_channels(const PipelineContext &ctx, const EmsConfiguration &config)
    {
        if (config.size() != ctx.panel_count())
            throw std::invalid_argument("configuration has " + std::to_string(config.size()) + " panels, scene has " +
                                        std::to_string(ctx.panel_count()));
        std::vector<CVector> h = ctx.direct;
        for (std::size_t j = 0; j < config.size(); ++j)
        {
            if (!config.panels[j])
                continue;
            const auto t = reflected_terms(ctx.outgoing[j], *config.panels[j], ctx.incident, j);
            for (std::size_t u = 0; u < h.size(); ++u)
                h[u] += t[u];
        }
        return h;
    }

    std::optional<PhaseProfile> aligned_profile(const PipelineContext &ctx, std::size_t user, std::size_t panel)
    {
        const auto &in = ctx.strongest_incident.at(user).at(panel);
        const auto &out = ctx.strongest_outgoing.at(panel);
        if (!in || !out)
            return std::nullopt;
        // The incident wave travels from the user's last hop into the panel.
        const AnglesPair incoming = angles_of(-unit_vector(in->arrival));
        PhaseProfile p = snell_profile(ctx.scene.ems_panels[panel], incoming, out->departure, ctx.scene.wavelength());
        p.label.kind = ProfileKind::aligned;
        return p;
    }

    std::vector<CVector> idealized_ris_channels(const PipelineContext &ctx)
    {
        std::vector<CVector> h(ctx.size());
        parallel_for(ctx.size(), ctx.threads, [&](std::size_t u) {
            CVector acc = ctx.direct[u];
            for (std::size_t j = 0; j < ctx.panel_count(); ++j)
            {
                const auto prof = aligned_profile(ctx, u, j);
                if (!prof)
                    continue;
                CVector c = ems_channel(ctx.outgoing[j], *prof, ctx.incident[u][j]);
                // A common phase offset over the panel turns the term towards what is already there.
                const Complex overlap = c.dot(acc);
                if (std::abs(overlap) > 0.0)
                    c *= overlap / std::abs(overlap);
                acc += c;
            }
            h[u] = std::move(acc);
        });
        return h;
    }

    std::vector<CovarianceFeature> estimate_features(const PipelineContext &ctx, const std::vector<CVector> &channels, unsigned threads)
    {
        if (channels.size() != ctx.size())
            throw std::invalid_argument("features: channel count does not match test points");
        std::vector<CovarianceFeature> f(channels.size());
        parallel_for(channels.size(), threads ? threads : ctx.threads, [&](std::size_t u) {
            const int id = ctx.point_ids[u];
            f[u] = estimate_covariance(channels[u], ctx.radio, point_seed(ctx.noise_seed, static_cast<std::uint64_t>(id)), id);
            try
            {
                ensure_log(f[u]);
            }
            catch (const std::exception &e)
            {
                throw std::invalid_argument("degenerate covariance at point " + std::to_string(id) + ": " + e.what());
            }
        });
        return f;
    }

    ChartFit fit_chart(const Eigen::MatrixXd &dissimilarity, const std::vector<CMatrix> &logs, const AnchorSet &anchors, const ChartSettings &chart,
                       ChartMethod method)
    {
        ChartFit fit;
        const Eigen::Index n = dissimilarity.rows();
        if (method == ChartMethod::tsne)
        {
            TsneConfig cfg = chart.tsne;
            // Small scenes cannot support the default perplexity.
            cfg.perplexity = std::min(cfg.perplexity, 0.5 * static_cast<double>(n));
            fit.tsne = run_stsne(dissimilarity, anchors, cfg);
            fit.embedding = fit.tsne->Z;
            return fit;
        }
        if (logs.size() != static_cast<std::size_t>(n) || logs.empty())
            throw std::invalid_argument("chart: log-covariance count does not match the dissimilarity matrix");
        const Eigen::Index dim = feature_dim(logs.front().rows());
        Eigen::MatrixXd rows(n, dim);
        for (Eigen::Index u = 0; u < n; ++u)
            rows.row(u) = featurize(logs[static_cast<std::size_t>(u)]).transpose();
        fit.ae = train_autoencoder(rows, anchors, chart.topology.spec(static_cast<int>(dim), 2), chart.ae);
        fit.embedding = infer_positions(fit.ae->model, rows);
        return fit;
    }

    ChartRun run_chart(const PipelineContext &ctx, const std::vector<CVector> &channels, ChartMethod method, bool keep_features, unsigned threads)
    {
        ChartRun run;
        run.snr_db.reserve(channels.size());
        for (const auto &h : channels)
            run.snr_db.push_back(snr_db(h, ctx.radio));
        auto features = estimate_features(ctx, channels, threads);
        std::vector<CMatrix> logs;
        logs.reserve(features.size());
        for (auto &f : features)
            logs.push_back(*f.logR);
        run.dissimilarity = dissimilarity_from_logs(logs).D;
        run.anchored = ctx.anchored;
        ChartFit fit = fit_chart(run.dissimilarity, logs, ctx.anchors, ctx.chart, method);
        run.embedding = std::move(fit.embedding);
        if (fit.tsne)
        {
            run.final_kl = fit.tsne->final_kl;
            run.kl_trace = std::move(fit.tsne->kl_trace);
        }
        run.ae = std::move(fit.ae);

        std::vector<bool> skip(ctx.size());
        for (std::size_t u = 0; u < ctx.size(); ++u)
            skip[u] = ctx.anchored[u] || ctx.excluded[u];
        run.report = evaluate_chart(run.dissimilarity, run.embedding, ctx.truth, skip, ctx.point_ids, ctx.chart.kappa);
        if (keep_features)
            run.covariances = std::move(features);
        return run;
    }

    double median_snr_db(const std::vector<double> &snr) { return quantile(snr, 0.5); }
} // namespace emschart
