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

#include "metrics.hpp"
#include "io.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace emschart
{
    std::string to_string(MetricKind m)
    {
        switch (m)
        {
        case MetricKind::le:
            return "le";
        case MetricKind::tw:
            return "tw";
        case MetricKind::ct:
            return "ct";
        }
        return "le";
    }

    MetricKind metric_from_string(const std::string &s)
    {
        if (s == "le")
            return MetricKind::le;
        if (s == "tw")
            return MetricKind::tw;
        if (s == "ct")
            return MetricKind::ct;
        throw std::invalid_argument("unknown metric '" + s + "' (expected le, tw or ct)");
    }

    std::vector<double> localization_error(const Eigen::MatrixXd &estimate, const Eigen::MatrixXd &truth)
    {
        if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
            throw std::invalid_argument("localization_error: estimate and truth shapes differ");
        std::vector<double> le(static_cast<std::size_t>(estimate.rows()));
        for (Eigen::Index u = 0; u < estimate.rows(); ++u)
            le[static_cast<std::size_t>(u)] = (estimate.row(u) - truth.row(u)).norm();
        return le;
    }

    Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd &points)
    {
        const Eigen::Index n = points.rows();
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index u = 0; u < n; ++u)
            for (Eigen::Index v = u + 1; v < n; ++v)
            {
                const double x = (points.row(u) - points.row(v)).norm();
                d(u, v) = x;
                d(v, u) = x;
            }
        return d;
    }

    RankTable neighbor_ranks(const Eigen::MatrixXd &dist)
    {
        const Eigen::Index n = dist.rows();
        if (dist.cols() != n)
            throw std::invalid_argument("neighbor_ranks: distance matrix must be square");
        RankTable t;
        t.n = n;
        if (n < 2)
            return t;
        t.order.resize(static_cast<std::size_t>(n * (n - 1)));
        t.rank.assign(static_cast<std::size_t>(n * n), 0);
        std::vector<int> row;
        for (Eigen::Index u = 0; u < n; ++u)
        {
            row.clear();
            for (Eigen::Index v = 0; v < n; ++v)
                if (v != u)
                    row.push_back(static_cast<int>(v));
            std::sort(row.begin(), row.end(), [&](int a, int b) {
                const double da = dist(u, a);
                const double db = dist(u, b);
                return da < db || (da == db && a < b);
            });
            for (std::size_t k = 0; k < row.size(); ++k)
            {
                t.order[static_cast<std::size_t>(u * (n - 1)) + k] = row[k];
                t.rank[static_cast<std::size_t>(u * n + row[k])] = static_cast<int>(k + 1);
            }
        }
        return t;
    }

    int max_valid_kappa(Eigen::Index n)
    {
        // kappa < (n - 1) / 2  <=>  2 kappa < n - 1
        if (n < 2)
            return 0;
        const auto k = (n - 2) / 2;
        return static_cast<int>(std::max<Eigen::Index>(0, k));
    }

    int default_kappa(Eigen::Index n)
    {
        const Eigen::Index base = n >= 500 ? 50 : std::max<Eigen::Index>(5, n / 10);
        return static_cast<int>(std::min<Eigen::Index>(base, max_valid_kappa(n)));
    }

    double neighborhood_norm(int kappa, Eigen::Index n)
    {
        return 2.0 / (static_cast<double>(kappa) * (2.0 * static_cast<double>(n) - 3.0 * kappa - 1.0));
    }

    namespace
    {
        bool all_equal(const Eigen::MatrixXd &d)
        {
            const Eigen::Index n = d.rows();
            if (n < 2)
                return true;
            const double ref = d(0, 1);
            for (Eigen::Index u = 0; u < n; ++u)
                for (Eigen::Index v = 0; v < n; ++v)
                    if (u != v && d(u, v) != ref)
                        return false;
            return true;
        }

        // 1 - eta * sum over v in select_u \ ranked_u of (rank in ranked space - kappa).
        NeighborhoodScores penalized(const Eigen::MatrixXd &ranked_space, const Eigen::MatrixXd &select_space, int kappa)
        {
            const Eigen::Index n = ranked_space.rows();
            if (ranked_space.cols() != n || select_space.rows() != n || select_space.cols() != n)
                throw std::invalid_argument("neighborhood metric: distance matrices must be square and of equal size");
            const int kmax = max_valid_kappa(n);
            if (kappa < 1 || kappa > kmax)
                throw std::invalid_argument("neighborhood metric: kappa = " + std::to_string(kappa) + " must satisfy 1 <= kappa < (N - 1) / 2 with N = " +
                                            std::to_string(n) + " (max " + std::to_string(kmax) + ")");
            NeighborhoodScores out;
            out.values.assign(static_cast<std::size_t>(n), 1.0);
            if (all_equal(ranked_space) || all_equal(select_space))
            {
                out.degenerate = true;
                return out;
            }
            const RankTable ranked = neighbor_ranks(ranked_space);
            const RankTable select = neighbor_ranks(select_space);
            const double eta = neighborhood_norm(kappa, n);
            for (Eigen::Index u = 0; u < n; ++u)
            {
                double penalty = 0.0;
                for (int pos = 0; pos < kappa; ++pos)
                {
                    const int v = select.neighbor(u, pos);
                    const int r = ranked.rank_of(u, v);
                    if (r > kappa)
                        penalty += static_cast<double>(r - kappa);
                }
                out.values[static_cast<std::size_t>(u)] = 1.0 - eta * penalty;
            }
            return out;
        }
    } // namespace

    NeighborhoodScores trustworthiness_from_distances(const Eigen::MatrixXd &original, const Eigen::MatrixXd &latent, int kappa)
    {
        return penalized(original, latent, kappa);
    }

    NeighborhoodScores continuity_from_distances(const Eigen::MatrixXd &original, const Eigen::MatrixXd &latent, int kappa)
    {
        return penalized(latent, original, kappa);
    }

    NeighborhoodScores trustworthiness(const Eigen::MatrixXd &original, const Eigen::MatrixXd &embedding, int kappa)
    {
        return trustworthiness_from_distances(original, pairwise_distances(embedding), kappa);
    }

    NeighborhoodScores continuity(const Eigen::MatrixXd &original, const Eigen::MatrixXd &embedding, int kappa)
    {
        return continuity_from_distances(original, pairwise_distances(embedding), kappa);
    }

    double quantile(std::vector<double> values, double alpha)
    {
        if (values.empty())
            throw std::invalid_argument("quantile: no values");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("quantile: alpha must lie in [0, 1]");
        std::sort(values.begin(), values.end());
        const double n = static_cast<double>(values.size());
        // The small guard keeps alpha * n = integer from rounding up a rank.
        auto k = static_cast<std::size_t>(std::ceil(alpha * n - 1e-9));
        k = std::clamp<std::size_t>(k, 1, values.size());
        return values[k - 1];
    }

    double mean(const std::vector<double> &values)
    {
        if (values.empty())
            return 0.0;
        return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }

    DropoutResult trajectory_dropout(const Eigen::MatrixXd &estimate, const Eigen::MatrixXd &truth, double threshold_m)
    {
        const auto le = localization_error(estimate, truth);
        DropoutResult r;
        r.flags.resize(le.size());
        std::size_t count = 0;
        for (std::size_t i = 0; i < le.size(); ++i)
        {
            r.flags[i] = le[i] > threshold_m;
            count += r.flags[i] ? 1 : 0;
        }
        r.fraction = le.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(le.size());
        return r;
    }

    const std::vector<double> &MetricReport::values(MetricKind m) const
    {
        switch (m)
        {
        case MetricKind::tw:
            return tw;
        case MetricKind::ct:
            return ct;
        default:
            return le;
        }
    }

    double MetricReport::objective(MetricKind m, double alpha) const
    {
        if (m == MetricKind::le)
            return quantile(le, alpha);
        std::vector<double> neg = values(m);
        for (auto &v : neg)
            v = -v;
        return quantile(neg, alpha);
    }

    MetricReport evaluate_chart(const Eigen::MatrixXd &dissimilarity, const Eigen::MatrixXd &embedding, const Eigen::MatrixXd &truth,
                                const std::vector<bool> &anchored, const std::vector<int> &point_ids, int kappa)
    {
        const Eigen::Index n = dissimilarity.rows();
        if (dissimilarity.cols() != n || embedding.rows() != n || truth.rows() != n || anchored.size() != static_cast<std::size_t>(n) ||
            point_ids.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("evaluate_chart: inconsistent point counts");
        std::vector<Eigen::Index> eval;
        for (Eigen::Index u = 0; u < n; ++u)
            if (!anchored[static_cast<std::size_t>(u)])
                eval.push_back(u);
        if (eval.empty())
            for (Eigen::Index u = 0; u < n; ++u)
                eval.push_back(u);
        const auto m = static_cast<Eigen::Index>(eval.size());
        Eigen::MatrixXd D(m, m), Z(m, embedding.cols()), Y(m, truth.cols());
        MetricReport r;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            for (Eigen::Index j = 0; j < m; ++j)
                D(i, j) = dissimilarity(eval[i], eval[j]);
            Z.row(i) = embedding.row(eval[i]);
            Y.row(i) = truth.row(eval[i]);
            r.point_ids.push_back(point_ids[static_cast<std::size_t>(eval[i])]);
        }
        r.le = localization_error(Z, Y);
        r.kappa = kappa > 0 ? kappa : default_kappa(m);
        if (r.kappa < 1)
        {
            // Too few points for any neighbourhood.
            r.tw.assign(static_cast<std::size_t>(m), 1.0);
            r.ct = r.tw;
            r.neighborhood_degenerate = true;
            return r;
        }
        const Eigen::MatrixXd DZ = pairwise_distances(Z);
        auto tw = trustworthiness_from_distances(D, DZ, r.kappa);
        auto ct = continuity_from_distances(D, DZ, r.kappa);
        r.tw = std::move(tw.values);
        r.ct = std::move(ct.values);
        r.neighborhood_degenerate = tw.degenerate || ct.degenerate;
        return r;
    }

    void write_metrics_csv(const std::filesystem::path &path, const MetricReport &r)
    {
        std::string s = "point_id,le_m,tw,ct\n";
        for (std::size_t i = 0; i < r.le.size(); ++i)
            s += std::to_string(r.point_ids[i]) + ',' + io::format_double(r.le[i]) + ',' + io::format_double(r.tw[i]) + ',' +
                 io::format_double(r.ct[i]) + '\n';
        io::write_file_atomic(path, s);
    }

    std::string summary_json(const MetricReport &r)
    {
        auto block = [](const std::vector<double> &v) {
            nlohmann::ordered_json j;
            j["mean"] = mean(v);
            j["q50"] = v.empty() ? 0.0 : quantile(v, 0.5);
            j["q90"] = v.empty() ? 0.0 : quantile(v, 0.9);
            j["q95"] = v.empty() ? 0.0 : quantile(v, 0.95);
            return j;
        };
        nlohmann::ordered_json j;
        j["n_eval"] = r.le.size();
        j["kappa"] = r.kappa;
        j["neighborhood_degenerate"] = r.neighborhood_degenerate;
        j["le_m"] = block(r.le);
        j["tw"] = block(r.tw);
        j["ct"] = block(r.ct);
        return j.dump(2) + "\n";
    }
} // namespace emschart
