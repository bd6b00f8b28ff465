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

#include "tsne.hpp"
#include "io.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace emschart
{
    void TsneConfig::validate(Eigen::Index n_points) const
    {
        if (!(perplexity > 1.0))
            throw std::invalid_argument("tsne: perplexity must exceed 1");
        if (!(perplexity < static_cast<double>(n_points - 1)))
            throw std::invalid_argument("tsne: perplexity " + std::to_string(perplexity) + " must be below N - 1 = " +
                                        std::to_string(n_points - 1));
        if (iterations < 0 || exaggeration_iters < 0 || exaggeration_iters > iterations)
            throw std::invalid_argument("tsne: need 0 <= exaggeration_iters <= iterations");
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("tsne: learning rate must be positive");
        if (!(momentum >= 0.0 && momentum < 1.0))
            throw std::invalid_argument("tsne: momentum must lie in [0, 1)");
        if (!(exaggeration >= 1.0))
            throw std::invalid_argument("tsne: exaggeration must be >= 1");
        if (latent_dim < 1)
            throw std::invalid_argument("tsne: latent dimension must be positive");
        if (!(monotone_fraction >= 0.0 && monotone_fraction <= 1.0))
            throw std::invalid_argument("tsne: monotone fraction must lie in [0, 1]");
    }

    void AnchorSet::validate(Eigen::Index n_points, int latent_dim) const
    {
        if (indices.size() < 3)
            throw std::invalid_argument("tsne: at least 3 anchors are required, got " + std::to_string(indices.size()));
        if (coordinates.rows() != static_cast<Eigen::Index>(indices.size()) || coordinates.cols() != latent_dim)
            throw std::invalid_argument("tsne: anchor coordinates must be |I| x latent_dim");
        std::set<int> seen;
        for (int i : indices)
        {
            if (i < 0 || i >= n_points)
                throw std::invalid_argument("tsne: anchor index " + std::to_string(i) + " out of range");
            if (!seen.insert(i).second)
                throw std::invalid_argument("tsne: duplicate anchor index " + std::to_string(i));
        }
        if (!coordinates.allFinite())
            throw std::invalid_argument("tsne: non-finite anchor coordinates");
    }

    namespace
    {
        constexpr double kPerplexityTol = 1e-5;
        constexpr int kMaxSearchSteps = 200;

        struct RowEntropy
        {
            double bits;
        };

        // Shifted squared distances keep exp() in range; the shift cancels in
        // the normalisation.
        double entropy_bits(std::span<const double> d2shift, double beta)
        {
            double z = 0.0;
            double wsum = 0.0;
            for (double d : d2shift)
            {
                const double w = std::exp(-beta * d);
                z += w;
                wsum += w * d;
            }
            const double nats = std::log(z) + beta * wsum / z;
            return nats / std::numbers::ln2;
        }
    } // namespace

    SigmaCalibration calibrate_sigma(std::span<const double> distances, double perplexity)
    {
        if (distances.size() < 2)
            throw std::invalid_argument("calibrate_sigma: need distances to at least two other points");
        if (!(perplexity > 0.0))
            throw std::invalid_argument("calibrate_sigma: perplexity must be positive");
        std::vector<double> d2(distances.size());
        bool any_positive = false;
        for (std::size_t i = 0; i < distances.size(); ++i)
        {
            const double d = distances[i];
            if (!std::isfinite(d) || d < 0.0)
                throw std::invalid_argument("calibrate_sigma: distances must be finite and non-negative");
            any_positive |= d > 0.0;
            d2[i] = d * d;
        }
        if (!any_positive)
            throw std::invalid_argument("calibrate_sigma: all distances are zero (duplicate points)");
        const double dmin = *std::min_element(d2.begin(), d2.end());
        double spread = 0.0;
        for (auto &v : d2)
        {
            v -= dmin;
            spread += v;
        }
        spread /= static_cast<double>(d2.size());

        const double target = std::log2(perplexity);
        double beta = spread > 0.0 ? 1.0 / spread : 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();

        SigmaCalibration out;
        double h = entropy_bits(d2, beta);
        int step = 0;
        for (; step < kMaxSearchSteps; ++step)
        {
            if (std::abs(std::exp2(h) - perplexity) < kPerplexityTol)
                break;
            if (h > target)
            {
                lo = beta; // too flat: sharpen
                beta = std::isinf(hi) ? 2.0 * beta : 0.5 * (lo + hi);
            }
            else
            {
                hi = beta;
                beta = 0.5 * (lo + hi);
            }
            h = entropy_bits(d2, beta);
        }
        out.beta = beta;
        out.sigma = beta > 0.0 ? 1.0 / std::sqrt(2.0 * beta) : std::numeric_limits<double>::infinity();
        out.entropy_bits = h;
        out.perplexity = std::exp2(h);
        out.steps = step;
        out.saturated = std::abs(out.perplexity - perplexity) >= kPerplexityTol;
        return out;
    }

    std::vector<double> conditional_row(std::span<const double> distances, double beta)
    {
        std::vector<double> p(distances.size());
        double dmin = std::numeric_limits<double>::infinity();
        for (double d : distances)
            dmin = std::min(dmin, d * d);
        double z = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
        {
            p[i] = std::exp(-beta * (distances[i] * distances[i] - dmin));
            z += p[i];
        }
        for (auto &v : p)
            v /= z;
        return p;
    }

    Eigen::MatrixXd conditional_p(const Eigen::MatrixXd &D, double perplexity)
    {
        const Eigen::Index n = D.rows();
        if (D.cols() != n || n < 2)
            throw std::invalid_argument("conditional_p: dissimilarity must be square with N >= 2");
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
        std::vector<double> row(static_cast<std::size_t>(n - 1));
        for (Eigen::Index u = 0; u < n; ++u)
        {
            std::size_t k = 0;
            for (Eigen::Index v = 0; v < n; ++v)
                if (v != u)
                    row[k++] = D(u, v);
            double beta = 0.0;
            if (row.size() >= 2)
                beta = calibrate_sigma(row, perplexity).beta;
            const auto p = conditional_row(row, beta);
            k = 0;
            for (Eigen::Index v = 0; v < n; ++v)
                if (v != u)
                    P(u, v) = p[k++];
        }
        return P;
    }

    Eigen::MatrixXd joint_p(const Eigen::MatrixXd &D, double perplexity)
    {
        const Eigen::MatrixXd C = conditional_p(D, perplexity);
        const double n = static_cast<double>(D.rows());
        Eigen::MatrixXd P = (C + C.transpose()) / (2.0 * n);
        P.diagonal().setZero();
        return P;
    }

    Eigen::MatrixXd student_q(const Eigen::MatrixXd &Z)
    {
        const Eigen::Index n = Z.rows();
        if (n < 2)
            throw std::invalid_argument("student_q: need at least two points");
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
        double total = 0.0;
        for (Eigen::Index u = 0; u < n; ++u)
            for (Eigen::Index v = u + 1; v < n; ++v)
            {
                const double w = 1.0 / (1.0 + (Z.row(u) - Z.row(v)).squaredNorm());
                Q(u, v) = w;
                Q(v, u) = w;
                total += 2.0 * w;
            }
        return Q / total;
    }

    Eigen::MatrixXd kl_gradient(const Eigen::MatrixXd &P, const Eigen::MatrixXd &Q, const Eigen::MatrixXd &Z)
    {
        const Eigen::Index n = Z.rows();
        if (P.rows() != n || P.cols() != n || Q.rows() != n || Q.cols() != n)
            throw std::invalid_argument("kl_gradient: shape mismatch");
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, Z.cols());
        for (Eigen::Index u = 0; u < n; ++u)
            for (Eigen::Index v = 0; v < n; ++v)
            {
                if (u == v)
                    continue;
                const auto dz = (Z.row(u) - Z.row(v)).eval();
                const double w = 1.0 / (1.0 + dz.squaredNorm());
                G.row(u) += 4.0 * (P(u, v) - Q(u, v)) * w * dz;
            }
        return G;
    }

    double kl_divergence(const Eigen::MatrixXd &P, const Eigen::MatrixXd &Q)
    {
        double kl = 0.0;
        for (Eigen::Index i = 0; i < P.size(); ++i)
        {
            const double p = P.data()[i];
            if (p > 0.0)
                kl += p * std::log(p / Q.data()[i]);
        }
        return kl;
    }

    namespace
    {
        // Working state for the optimisation loop: coordinates packed row-major
        // so the O(N^2) kernels stay cache friendly.
        class StsneSolver
        {
          public:
            StsneSolver(const Eigen::MatrixXd &P, int dim) : P_(P), n_(P.rows()), dim_(dim), num_(static_cast<std::size_t>(n_ * n_)) {}

            // Fills the Student-t numerators for `z` and returns their total.
            double kernel(const std::vector<double> &z)
            {
                double total = 0.0;
                for (Eigen::Index u = 0; u < n_; ++u)
                {
                    num_[idx(u, u)] = 0.0;
                    for (Eigen::Index v = u + 1; v < n_; ++v)
                    {
                        double d2 = 0.0;
                        for (int k = 0; k < dim_; ++k)
                        {
                            const double d = z[static_cast<std::size_t>(u * dim_ + k)] - z[static_cast<std::size_t>(v * dim_ + k)];
                            d2 += d * d;
                        }
                        const double w = 1.0 / (1.0 + d2);
                        num_[idx(u, v)] = w;
                        num_[idx(v, u)] = w;
                        total += 2.0 * w;
                    }
                }
                return total;
            }

            double kl(double total) const
            {
                double kl = 0.0;
                for (Eigen::Index u = 0; u < n_; ++u)
                    for (Eigen::Index v = 0; v < n_; ++v)
                    {
                        const double p = P_(u, v);
                        if (p > 0.0)
                            kl += p * std::log(p * total / num_[idx(u, v)]);
                    }
                return kl;
            }

            void gradient(const std::vector<double> &z, double total, double exaggeration, const std::vector<bool> &anchored,
                          std::vector<double> &grad) const
            {
                std::fill(grad.begin(), grad.end(), 0.0);
                const double inv_total = 1.0 / total;
                for (Eigen::Index u = 0; u < n_; ++u)
                {
                    if (anchored[static_cast<std::size_t>(u)])
                        continue;
                    for (Eigen::Index v = 0; v < n_; ++v)
                    {
                        if (u == v)
                            continue;
                        const double w = num_[idx(u, v)];
                        const double coeff = 4.0 * (exaggeration * P_(u, v) - w * inv_total) * w;
                        for (int k = 0; k < dim_; ++k)
                            grad[static_cast<std::size_t>(u * dim_ + k)] +=
                                coeff * (z[static_cast<std::size_t>(u * dim_ + k)] - z[static_cast<std::size_t>(v * dim_ + k)]);
                    }
                }
            }

          private:
            std::size_t idx(Eigen::Index u, Eigen::Index v) const { return static_cast<std::size_t>(u * n_ + v); }

            const Eigen::MatrixXd &P_;
            Eigen::Index n_;
            int dim_;
            std::vector<double> num_;
        };
    } // namespace

    Embedding run_stsne(const Eigen::MatrixXd &D, const AnchorSet &anchors, const TsneConfig &cfg)
    {
        const Eigen::Index n = D.rows();
        if (D.cols() != n || n < 2)
            throw std::invalid_argument("run_stsne: dissimilarity must be square with N >= 2");
        anchors.validate(n, cfg.latent_dim);
        const int dim = cfg.latent_dim;

        Embedding out;
        out.anchored.assign(static_cast<std::size_t>(n), false);
        for (int i : anchors.indices)
            out.anchored[static_cast<std::size_t>(i)] = true;
        const bool all_anchored = anchors.size() == static_cast<std::size_t>(n);

        std::vector<double> z(static_cast<std::size_t>(n * dim), 0.0);
        auto clamp = [&](std::vector<double> &zz) {
            for (std::size_t a = 0; a < anchors.size(); ++a)
                for (int k = 0; k < dim; ++k)
                    zz[static_cast<std::size_t>(anchors.indices[a] * dim + k)] = anchors.coordinates(static_cast<Eigen::Index>(a), k);
        };
        auto to_matrix = [&](const std::vector<double> &zz) {
            Eigen::MatrixXd Z(n, dim);
            for (Eigen::Index u = 0; u < n; ++u)
                for (int k = 0; k < dim; ++k)
                    Z(u, k) = zz[static_cast<std::size_t>(u * dim + k)];
            return Z;
        };

        if (all_anchored)
        {
            clamp(z);
            out.Z = to_matrix(z);
            out.final_kl = 0.0;
            return out;
        }

        cfg.validate(n);
        for (Eigen::Index u = 0; u < n; ++u)
        {
            bool zero_row = true;
            for (Eigen::Index v = 0; v < n && zero_row; ++v)
                zero_row = (u == v) || D(u, v) == 0.0;
            if (zero_row)
                throw std::invalid_argument("run_stsne: point " + std::to_string(u) + " has zero dissimilarity to every other point");
        }

        const Eigen::MatrixXd P = joint_p(D, cfg.perplexity);
        StsneSolver solver(P, dim);

        // Free points start as a Gaussian cloud around the anchor centroid.
        const Eigen::RowVectorXd centroid = anchors.coordinates.colwise().mean();
        Rng rng(cfg.seed);
        for (Eigen::Index u = 0; u < n; ++u)
            for (int k = 0; k < dim; ++k)
                z[static_cast<std::size_t>(u * dim + k)] = centroid[k] + cfg.init_scale * rng.normal();
        clamp(z);

        std::vector<double> z_prev = z;
        std::vector<double> grad(z.size());
        std::vector<double> z_accepted = z;
        double accepted_kl = std::numeric_limits<double>::infinity();
        double lr = cfg.learning_rate;
        const int monotone_start = cfg.iterations - static_cast<int>(std::floor(cfg.monotone_fraction * cfg.iterations));
        out.exaggeration_end = cfg.exaggeration_iters;

        for (int t = 1; t <= cfg.iterations; ++t)
        {
            double total = solver.kernel(z);
            const bool guarded = t > monotone_start && t > cfg.exaggeration_iters;
            const bool want_trace = cfg.trace_every > 0 && (t % cfg.trace_every == 1 || cfg.trace_every == 1);
            if (guarded)
            {
                double kl = solver.kl(total);
                if (kl > accepted_kl)
                {
                    // Overshoot: back to the last accepted state, halve the step, drop momentum.
                    z = z_accepted;
                    z_prev = z_accepted;
                    lr *= 0.5;
                    total = solver.kernel(z);
                    kl = accepted_kl;
                }
                else
                {
                    z_accepted = z;
                    accepted_kl = kl;
                }
                if (want_trace)
                    out.kl_trace.push_back({t - 1, kl});
            }
            else if (want_trace)
                out.kl_trace.push_back({t - 1, solver.kl(total)});

            const double exag = t <= cfg.exaggeration_iters ? cfg.exaggeration : 1.0;
            solver.gradient(z, total, exag, out.anchored, grad);
            for (std::size_t i = 0; i < z.size(); ++i)
            {
                const double next = z[i] - lr * grad[i] + cfg.momentum * (z[i] - z_prev[i]);
                z_prev[i] = z[i];
                z[i] = next;
            }
            clamp(z);
            clamp(z_prev);
            for (double v : z)
                if (!std::isfinite(v))
                    throw std::runtime_error("run_stsne: non-finite coordinates at iteration " + std::to_string(t));
        }

        double total = solver.kernel(z);
        double kl = solver.kl(total);
        if (cfg.iterations > monotone_start && cfg.iterations > cfg.exaggeration_iters && kl > accepted_kl)
        {
            z = z_accepted;
            kl = accepted_kl;
        }
        out.kl_trace.push_back({cfg.iterations, kl});
        out.final_kl = kl;
        out.Z = to_matrix(z);
        return out;
    }

    void write_embedding_csv(const std::filesystem::path &path, const Embedding &e, const std::vector<int> &point_ids)
    {
        if (point_ids.size() != static_cast<std::size_t>(e.size()))
            throw std::invalid_argument("write_embedding_csv: id count mismatch");
        std::string s = "point_id,x,y,anchored\n";
        for (Eigen::Index u = 0; u < e.size(); ++u)
        {
            s += std::to_string(point_ids[static_cast<std::size_t>(u)]);
            s += ',' + io::format_double(e.Z(u, 0));
            s += ',' + io::format_double(e.Z.cols() > 1 ? e.Z(u, 1) : 0.0);
            s += e.anchored.empty() ? ",0" : (e.anchored[static_cast<std::size_t>(u)] ? ",1" : ",0");
            s += '\n';
        }
        io::write_file_atomic(path, s);
    }

    void write_kl_trace_csv(const std::filesystem::path &path, const Embedding &e)
    {
        std::string s = "iteration,kl\n";
        for (const auto &k : e.kl_trace)
            s += std::to_string(k.iteration) + ',' + io::format_double(k.kl) + '\n';
        io::write_file_atomic(path, s);
    }
} // namespace emschart
