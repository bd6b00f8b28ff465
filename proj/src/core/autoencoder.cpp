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

#include "autoencoder.hpp"
#include "io.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace emschart
{
    Eigen::VectorXd featurize(const CMatrix &logR)
    {
        const Eigen::Index n = logR.rows();
        if (logR.cols() != n)
            throw std::invalid_argument("featurize: matrix must be square");
        Eigen::VectorXd v = Eigen::VectorXd::Zero(feature_dim(n));
        Eigen::Index k = 0;
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = r; c < n; ++c)
                v[k++] = logR(r, c).real();
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = r + 1; c < n; ++c)
                v[k++] = logR(r, c).imag();
        return v;
    }

    CMatrix unfeaturize(const Eigen::VectorXd &values, Eigen::Index n)
    {
        if (values.size() != feature_dim(n))
            throw std::invalid_argument("unfeaturize: expected " + std::to_string(feature_dim(n)) + " values");
        CMatrix m(n, n);
        Eigen::Index k = 0;
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = r; c < n; ++c)
                m(r, c) = Complex(values[k++], 0.0);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = r + 1; c < n; ++c)
            {
                m(r, c) = Complex(m(r, c).real(), values[k++]);
                m(c, r) = std::conj(m(r, c));
            }
        return m;
    }

    Standardizer Standardizer::fit(const Eigen::MatrixXd &rows)
    {
        if (rows.rows() == 0)
            throw std::invalid_argument("standardizer: no samples to fit");
        Standardizer s;
        s.mean = rows.colwise().mean().transpose();
        const Eigen::MatrixXd centered = rows.rowwise() - s.mean.transpose();
        s.scale = (centered.colwise().squaredNorm() / static_cast<double>(rows.rows())).cwiseSqrt().transpose();
        for (Eigen::Index i = 0; i < s.scale.size(); ++i)
            s.scale[i] = std::max(s.scale[i], kFloor);
        return s;
    }

    Standardizer Standardizer::identity(Eigen::Index dim)
    {
        return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
    }

    Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd &rows) const
    {
        if (rows.cols() != mean.size())
            throw std::invalid_argument("standardizer: feature dimension mismatch");
        return (rows.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
    }

    Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd &x) const
    {
        if (x.size() != mean.size())
            throw std::invalid_argument("standardizer: feature dimension mismatch");
        return (x - mean).cwiseQuotient(scale);
    }

    std::string to_string(Activation a)
    {
        switch (a)
        {
        case Activation::linear:
            return "linear";
        case Activation::relu:
            return "relu";
        case Activation::tanh:
            return "tanh";
        }
        return "linear";
    }

    Activation activation_from_string(const std::string &s)
    {
        if (s == "linear")
            return Activation::linear;
        if (s == "relu")
            return Activation::relu;
        if (s == "tanh")
            return Activation::tanh;
        throw std::invalid_argument("unknown activation '" + s + "'");
    }

    MlpSpec MlpSpec::defaults(int input_dim, int latent_dim)
    {
        MlpSpec s;
        s.encoder_widths = {input_dim, 512, 128, 32, latent_dim};
        s.encoder_activations = {Activation::relu, Activation::relu, Activation::tanh};
        return s;
    }

    std::vector<Activation> MlpSpec::resolved_decoder_activations() const
    {
        if (!decoder_activations.empty())
            return decoder_activations;
        return {encoder_activations.rbegin(), encoder_activations.rend()};
    }

    void MlpSpec::validate() const
    {
        if (encoder_widths.size() < 2)
            throw std::invalid_argument("mlp: need at least input and latent widths");
        for (int w : encoder_widths)
            if (w < 1)
                throw std::invalid_argument("mlp: layer widths must be positive");
        const std::size_t hidden = encoder_widths.size() - 2;
        if (encoder_activations.size() != hidden)
            throw std::invalid_argument("mlp: need one encoder activation per hidden layer (" + std::to_string(hidden) + ")");
        if (!decoder_activations.empty() && decoder_activations.size() != hidden)
            throw std::invalid_argument("mlp: need one decoder activation per hidden layer (" + std::to_string(hidden) + ")");
    }

    void AeConfig::validate() const
    {
        if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 || eta < 0.0)
            throw std::invalid_argument("ae: loss weights and eta must be non-negative");
        if (!(alpha + beta + gamma > 0.0))
            throw std::invalid_argument("ae: alpha + beta + gamma must be positive");
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("ae: learning rate must be positive");
        if (batch_size < 1)
            throw std::invalid_argument("ae: batch size must be positive");
        if (epochs < 0)
            throw std::invalid_argument("ae: epochs must be non-negative");
    }

    AeModel init_model(const MlpSpec &spec, std::uint64_t seed)
    {
        spec.validate();
        Rng rng(seed);
        auto make = [&](int in, int out, Activation act) {
            DenseLayer l;
            const double bound = 1.0 / std::sqrt(static_cast<double>(in));
            l.W.resize(out, in);
            for (Eigen::Index r = 0; r < out; ++r)
                for (Eigen::Index c = 0; c < in; ++c)
                    l.W(r, c) = rng.uniform(-bound, bound);
            l.b = Eigen::VectorXd::Zero(out);
            l.act = act;
            return l;
        };
        AeModel m;
        const auto &w = spec.encoder_widths;
        const std::size_t layers = w.size() - 1;
        for (std::size_t i = 0; i < layers; ++i)
            m.encoder.push_back(make(w[i], w[i + 1], i + 1 < layers ? spec.encoder_activations[i] : Activation::linear));
        const auto dec_acts = spec.resolved_decoder_activations();
        for (std::size_t i = 0; i < layers; ++i)
        {
            const int in = w[layers - i];
            const int out = w[layers - i - 1];
            m.decoder.push_back(make(in, out, i + 1 < layers ? dec_acts[i] : Activation::linear));
        }
        m.features = Standardizer::identity(w.front());
        m.label_center = Eigen::VectorXd::Zero(w.back());
        m.label_scale = 1.0;
        return m;
    }

    namespace
    {
        // Activations of every layer for a column batch; post[0] is the input.
        struct Trace
        {
            std::vector<Eigen::MatrixXd> pre;
            std::vector<Eigen::MatrixXd> post;
        };

        void activate(Eigen::MatrixXd &m, Activation a)
        {
            switch (a)
            {
            case Activation::linear:
                break;
            case Activation::relu:
                m = m.cwiseMax(0.0);
                break;
            case Activation::tanh:
                m = m.array().tanh().matrix();
                break;
            }
        }

        Trace run(const std::vector<DenseLayer> &layers, const Eigen::MatrixXd &cols)
        {
            Trace t;
            t.post.push_back(cols);
            for (const auto &l : layers)
            {
                Eigen::MatrixXd pre = l.W * t.post.back();
                pre.colwise() += l.b;
                Eigen::MatrixXd post = pre;
                activate(post, l.act);
                t.pre.push_back(std::move(pre));
                t.post.push_back(std::move(post));
            }
            return t;
        }

        Eigen::MatrixXd propagate(const std::vector<DenseLayer> &layers, Eigen::MatrixXd cols)
        {
            for (const auto &l : layers)
            {
                Eigen::MatrixXd pre = l.W * cols;
                pre.colwise() += l.b;
                activate(pre, l.act);
                cols = std::move(pre);
            }
            return cols;
        }

        // Accumulates parameter gradients; returns the gradient at the input.
        Eigen::MatrixXd backward(const std::vector<DenseLayer> &layers, const Trace &t, Eigen::MatrixXd d_out, std::vector<LayerGrad> &grads)
        {
            for (std::size_t i = layers.size(); i-- > 0;)
            {
                const auto &l = layers[i];
                switch (l.act)
                {
                case Activation::linear:
                    break;
                case Activation::relu:
                    d_out = d_out.cwiseProduct((t.pre[i].array() > 0.0).cast<double>().matrix());
                    break;
                case Activation::tanh:
                    d_out = d_out.cwiseProduct((1.0 - t.post[i + 1].array().square()).matrix());
                    break;
                }
                grads[i].dW.noalias() += d_out * t.post[i].transpose();
                grads[i].db += d_out.rowwise().sum();
                d_out = (l.W.transpose() * d_out).eval();
            }
            return d_out;
        }

        std::vector<LayerGrad> zero_grads(const std::vector<DenseLayer> &layers)
        {
            std::vector<LayerGrad> g;
            for (const auto &l : layers)
                g.push_back({Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()), Eigen::VectorXd::Zero(l.b.size())});
            return g;
        }

        double weight_norm2(const std::vector<DenseLayer> &layers)
        {
            double s = 0.0;
            for (const auto &l : layers)
                s += l.W.squaredNorm();
            return s;
        }

        void check_batch(const AeModel &model, const Eigen::MatrixXd &batch, const BatchLabels &labels)
        {
            if (batch.cols() != model.input_dim())
                throw std::invalid_argument("autoencoder: batch has " + std::to_string(batch.cols()) + " features, model expects " +
                                            std::to_string(model.input_dim()));
            if (labels.targets.rows() != static_cast<Eigen::Index>(labels.rows.size()) ||
                (!labels.rows.empty() && labels.targets.cols() != model.latent_dim()))
                throw std::invalid_argument("autoencoder: label targets must be |L| x latent_dim");
            for (int r : labels.rows)
                if (r < 0 || r >= batch.rows())
                    throw std::invalid_argument("autoencoder: label row out of range");
        }

        LossBreakdown evaluate(const AeModel &model, const Eigen::MatrixXd &batch, const BatchLabels &labels, const AeConfig &cfg,
                               AeGradient *grad)
        {
            check_batch(model, batch, labels);
            LossBreakdown out;
            const Eigen::MatrixXd X = batch.transpose();
            const double nb = static_cast<double>(X.cols());
            const bool use_labels = !labels.rows.empty();
            out.labels_empty = !use_labels;
            const bool do_ae = cfg.alpha > 0.0 && X.cols() > 0;
            const bool do_enc = cfg.beta > 0.0 && use_labels;
            const bool do_dec = cfg.gamma > 0.0 && use_labels;

            if (grad)
            {
                grad->encoder = zero_grads(model.encoder);
                grad->decoder = zero_grads(model.decoder);
            }
            if (!do_ae && !do_enc && !do_dec)
                return out;

            const Trace te = run(model.encoder, X);
            const Eigen::MatrixXd &Z = te.post.back();
            Eigen::MatrixXd dZ = Eigen::MatrixXd::Zero(Z.rows(), Z.cols());
            const double enc_w2 = weight_norm2(model.encoder);

            if (do_ae)
            {
                const Trace td = run(model.decoder, Z);
                const Eigen::MatrixXd diff = td.post.back() - X;
                out.reconstruction = diff.squaredNorm() / nb + 0.5 * cfg.eta * (enc_w2 + weight_norm2(model.decoder));
                if (grad)
                    dZ += backward(model.decoder, td, (2.0 * cfg.alpha / nb) * diff, grad->decoder);
            }

            const double nl = static_cast<double>(labels.rows.size());
            Eigen::MatrixXd Y;
            if (use_labels)
                Y = labels.targets.transpose();
            if (do_enc)
            {
                double s = 0.0;
                for (std::size_t i = 0; i < labels.rows.size(); ++i)
                {
                    const Eigen::VectorXd d = Z.col(labels.rows[i]) - Y.col(static_cast<Eigen::Index>(i));
                    s += d.squaredNorm();
                    if (grad)
                        dZ.col(labels.rows[i]) += (2.0 * cfg.beta / nl) * d;
                }
                out.encoder = s / nl + 0.5 * cfg.eta * enc_w2;
            }
            if (do_dec)
            {
                const Trace tl = run(model.decoder, Y);
                Eigen::MatrixXd diff(X.rows(), Y.cols());
                for (std::size_t i = 0; i < labels.rows.size(); ++i)
                    diff.col(static_cast<Eigen::Index>(i)) = tl.post.back().col(static_cast<Eigen::Index>(i)) - X.col(labels.rows[i]);
                out.decoder = diff.squaredNorm() / nl;
                if (grad)
                    backward(model.decoder, tl, (2.0 * cfg.gamma / nl) * diff, grad->decoder);
            }
            if (grad)
            {
                backward(model.encoder, te, dZ, grad->encoder);
                const double enc_decay = cfg.eta * ((do_ae ? cfg.alpha : 0.0) + (do_enc ? cfg.beta : 0.0));
                const double dec_decay = cfg.eta * (do_ae ? cfg.alpha : 0.0);
                for (std::size_t i = 0; i < model.encoder.size(); ++i)
                    grad->encoder[i].dW += enc_decay * model.encoder[i].W;
                for (std::size_t i = 0; i < model.decoder.size(); ++i)
                    grad->decoder[i].dW += dec_decay * model.decoder[i].W;
            }
            out.total = cfg.alpha * out.reconstruction + cfg.beta * out.encoder + cfg.gamma * out.decoder;
            return out;
        }
    } // namespace

    AeOutput forward(const AeModel &model, const Eigen::VectorXd &x)
    {
        if (x.size() != model.input_dim())
            throw std::invalid_argument("forward: input has " + std::to_string(x.size()) + " entries, model expects " +
                                        std::to_string(model.input_dim()));
        AeOutput out;
        out.z = propagate(model.encoder, x);
        out.reconstruction = propagate(model.decoder, out.z);
        return out;
    }

    Eigen::MatrixXd encode(const AeModel &model, const Eigen::MatrixXd &rows)
    {
        if (rows.rows() == 0)
            return Eigen::MatrixXd(0, model.latent_dim());
        if (rows.cols() != model.input_dim())
            throw std::invalid_argument("encode: feature dimension mismatch");
        return propagate(model.encoder, rows.transpose()).transpose();
    }

    LossBreakdown loss_total(const AeModel &model, const Eigen::MatrixXd &batch, const BatchLabels &labels, const AeConfig &cfg)
    {
        return evaluate(model, batch, labels, cfg, nullptr);
    }

    LossBreakdown loss_and_gradient(const AeModel &model, const Eigen::MatrixXd &batch, const BatchLabels &labels, const AeConfig &cfg,
                                    AeGradient &grad)
    {
        return evaluate(model, batch, labels, cfg, &grad);
    }

    AeTrainResult train_autoencoder(const Eigen::MatrixXd &features, const AnchorSet &anchors, const MlpSpec &spec, const AeConfig &cfg)
    {
        cfg.validate();
        spec.validate();
        const Eigen::Index n = features.rows();
        if (features.cols() != spec.input_dim())
            throw std::invalid_argument("train: features have " + std::to_string(features.cols()) + " columns, spec expects " +
                                        std::to_string(spec.input_dim()));
        if (anchors.size() == 0)
            throw std::invalid_argument("train: at least one anchor is required");
        if (anchors.coordinates.rows() != static_cast<Eigen::Index>(anchors.size()) || anchors.coordinates.cols() != spec.latent_dim())
            throw std::invalid_argument("train: anchor coordinates must be |I| x latent_dim");
        std::vector<int> label_of(static_cast<std::size_t>(n), -1);
        for (std::size_t a = 0; a < anchors.size(); ++a)
        {
            const int i = anchors.indices[a];
            if (i < 0 || i >= n)
                throw std::invalid_argument("train: anchor index out of range");
            label_of[static_cast<std::size_t>(i)] = static_cast<int>(a);
        }

        AeTrainResult res;
        AeModel &model = res.model;
        model = init_model(spec, cfg.seed);

        // Statistics come from the anchors only.
        Eigen::MatrixXd anchor_rows(static_cast<Eigen::Index>(anchors.size()), features.cols());
        for (std::size_t a = 0; a < anchors.size(); ++a)
            anchor_rows.row(static_cast<Eigen::Index>(a)) = features.row(anchors.indices[a]);
        model.features = Standardizer::fit(anchor_rows);
        if (cfg.normalize_labels)
        {
            model.label_center = anchors.coordinates.colwise().mean().transpose();
            const double spread =
                std::sqrt((anchors.coordinates.rowwise() - model.label_center.transpose()).squaredNorm() /
                          static_cast<double>(anchors.coordinates.size()));
            model.label_scale = spread > 0.0 ? spread : 1.0;
        }
        const Eigen::MatrixXd X = model.features.apply(features);
        const Eigen::MatrixXd targets = (anchors.coordinates.rowwise() - model.label_center.transpose()) / model.label_scale;

        BatchLabels all_labels;
        all_labels.rows = anchors.indices;
        all_labels.targets = targets;
        auto check = [&](const LossBreakdown &l, int epoch) {
            if (!std::isfinite(l.total) || l.total > 1e12)
                throw std::runtime_error("autoencoder training diverged at epoch " + std::to_string(epoch));
        };
        res.trace.push_back(loss_total(model, X, all_labels, cfg));
        check(res.trace.back(), 0);

        Rng rng(mix_seed(cfg.seed, 0xAE));
        std::vector<int> order(static_cast<std::size_t>(n));
        AeGradient grad;
        for (int epoch = 1; epoch <= cfg.epochs; ++epoch)
        {
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng.below(i)]);
            for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size))
            {
                const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
                Eigen::MatrixXd batch(static_cast<Eigen::Index>(stop - start), X.cols());
                BatchLabels bl;
                std::vector<Eigen::Index> label_src;
                for (std::size_t k = start; k < stop; ++k)
                {
                    const int u = order[k];
                    batch.row(static_cast<Eigen::Index>(k - start)) = X.row(u);
                    if (label_of[static_cast<std::size_t>(u)] >= 0)
                    {
                        bl.rows.push_back(static_cast<int>(k - start));
                        label_src.push_back(label_of[static_cast<std::size_t>(u)]);
                    }
                }
                bl.targets.resize(static_cast<Eigen::Index>(label_src.size()), targets.cols());
                for (std::size_t k = 0; k < label_src.size(); ++k)
                    bl.targets.row(static_cast<Eigen::Index>(k)) = targets.row(label_src[k]);

                const LossBreakdown l = loss_and_gradient(model, batch, bl, cfg, grad);
                check(l, epoch);
                for (std::size_t i = 0; i < model.encoder.size(); ++i)
                {
                    model.encoder[i].W -= cfg.learning_rate * grad.encoder[i].dW;
                    model.encoder[i].b -= cfg.learning_rate * grad.encoder[i].db;
                }
                for (std::size_t i = 0; i < model.decoder.size(); ++i)
                {
                    model.decoder[i].W -= cfg.learning_rate * grad.decoder[i].dW;
                    model.decoder[i].b -= cfg.learning_rate * grad.decoder[i].db;
                }
            }
            res.trace.push_back(loss_total(model, X, all_labels, cfg));
            check(res.trace.back(), epoch);
        }
        return res;
    }

    Eigen::MatrixXd infer_positions(const AeModel &model, const Eigen::MatrixXd &features)
    {
        if (features.rows() == 0)
            return Eigen::MatrixXd(0, model.latent_dim());
        const Eigen::MatrixXd z = encode(model, model.features.apply(features));
        return (model.label_scale * z).rowwise() + model.label_center.transpose();
    }

    namespace
    {
        constexpr char kModelMagic[8] = {'E', 'M', 'S', 'C', 'A', 'E', '0', '1'};

        struct Writer
        {
            std::string s;
            void u64(std::uint64_t v)
            {
                for (int i = 0; i < 8; ++i)
                    s += static_cast<char>((v >> (8 * i)) & 0xFF);
            }
            void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
            void mat(const Eigen::MatrixXd &m)
            {
                for (Eigen::Index r = 0; r < m.rows(); ++r)
                    for (Eigen::Index c = 0; c < m.cols(); ++c)
                        f64(m(r, c));
            }
            void vec(const Eigen::VectorXd &v)
            {
                u64(static_cast<std::uint64_t>(v.size()));
                for (Eigen::Index i = 0; i < v.size(); ++i)
                    f64(v[i]);
            }
        };

        struct Reader
        {
            const std::string &s;
            std::size_t at = 0;
            std::uint64_t u64()
            {
                if (at + 8 > s.size())
                    throw std::runtime_error("model file truncated");
                std::uint64_t v = 0;
                for (int i = 0; i < 8; ++i)
                    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
                at += 8;
                return v;
            }
            double f64() { return std::bit_cast<double>(u64()); }
            std::uint64_t bounded(std::uint64_t limit)
            {
                const auto v = u64();
                if (v > limit)
                    throw std::runtime_error("model file corrupt: size field out of range");
                return v;
            }
            Eigen::VectorXd vec()
            {
                const auto n = static_cast<Eigen::Index>(bounded(1u << 24));
                Eigen::VectorXd v(n);
                for (Eigen::Index i = 0; i < n; ++i)
                    v[i] = f64();
                return v;
            }
        };

        void put_layers(Writer &w, const std::vector<DenseLayer> &layers)
        {
            w.u64(layers.size());
            for (const auto &l : layers)
            {
                w.u64(static_cast<std::uint64_t>(l.W.rows()));
                w.u64(static_cast<std::uint64_t>(l.W.cols()));
                w.u64(static_cast<std::uint64_t>(l.act));
                w.mat(l.W);
                for (Eigen::Index i = 0; i < l.b.size(); ++i)
                    w.f64(l.b[i]);
            }
        }

        std::vector<DenseLayer> get_layers(Reader &r)
        {
            std::vector<DenseLayer> layers(r.bounded(64));
            for (auto &l : layers)
            {
                const auto rows = static_cast<Eigen::Index>(r.bounded(1u << 20));
                const auto cols = static_cast<Eigen::Index>(r.bounded(1u << 20));
                l.act = static_cast<Activation>(r.bounded(2));
                l.W.resize(rows, cols);
                for (Eigen::Index i = 0; i < rows; ++i)
                    for (Eigen::Index j = 0; j < cols; ++j)
                        l.W(i, j) = r.f64();
                l.b.resize(rows);
                for (Eigen::Index i = 0; i < rows; ++i)
                    l.b[i] = r.f64();
            }
            return layers;
        }
    } // namespace

    void save_model(const std::filesystem::path &path, const AeModel &model)
    {
        Writer w;
        w.s.append(kModelMagic, sizeof kModelMagic);
        w.u64(1); // format version
        put_layers(w, model.encoder);
        put_layers(w, model.decoder);
        w.vec(model.features.mean);
        w.vec(model.features.scale);
        w.vec(model.label_center);
        w.f64(model.label_scale);
        io::write_file_atomic(path, w.s);
    }

    AeModel load_model(const std::filesystem::path &path)
    {
        const std::string s = io::read_file(path);
        if (s.size() < sizeof kModelMagic || s.compare(0, sizeof kModelMagic, kModelMagic, sizeof kModelMagic) != 0)
            throw std::runtime_error("not an autoencoder model file: " + path.string());
        Reader r{s, sizeof kModelMagic};
        if (r.u64() != 1)
            throw std::runtime_error("unsupported model format version in " + path.string());
        AeModel m;
        m.encoder = get_layers(r);
        m.decoder = get_layers(r);
        m.features.mean = r.vec();
        m.features.scale = r.vec();
        m.label_center = r.vec();
        m.label_scale = r.f64();
        if (r.at != s.size())
            throw std::runtime_error("model file has trailing bytes: " + path.string());
        if (m.encoder.empty() || m.decoder.empty())
            throw std::runtime_error("model file has no layers: " + path.string());
        return m;
    }

    void write_loss_trace_csv(const std::filesystem::path &path, const std::vector<LossBreakdown> &trace)
    {
        std::string s = "epoch,total,reconstruction,encoder,decoder\n";
        for (std::size_t i = 0; i < trace.size(); ++i)
        {
            const auto &l = trace[i];
            s += std::to_string(i) + ',' + io::format_double(l.total) + ',' + io::format_double(l.reconstruction) + ',' +
                 io::format_double(l.encoder) + ',' + io::format_double(l.decoder) + '\n';
        }
        io::write_file_atomic(path, s);
    }
} // namespace emschart
