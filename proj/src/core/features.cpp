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

#include "features.hpp"
#include "io.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <sstream>
#include <stdexcept>
#include <string>

namespace emschart
{
    CMatrix hermitian_log(const CMatrix &R, double floor)
    {
        if (R.rows() != R.cols() || R.rows() == 0)
            throw std::invalid_argument("hermitian_log: matrix must be square and non-empty");
        if (!R.allFinite())
            throw std::invalid_argument("hermitian_log: non-finite entries");
        if (R.cwiseAbs().maxCoeff() == 0.0)
            throw std::invalid_argument("hermitian_log: zero matrix has no logarithm");

        Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("hermitian_log: eigendecomposition failed");
        Eigen::VectorXd lambda = es.eigenvalues();
        const double lmax = lambda.maxCoeff();
        if (!(lmax > 0.0))
            throw std::invalid_argument("hermitian_log: matrix has no positive eigenvalue");
        const double lo = floor * lmax;
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
            lambda[i] = std::log(std::max(lambda[i], lo));
        const CMatrix &U = es.eigenvectors();
        CMatrix out = U * lambda.asDiagonal() * U.adjoint();
        // Exact Hermitian symmetry.
        return 0.5 * (out + out.adjoint());
    }

    CMatrix hermitian_exp(const CMatrix &A)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("hermitian_exp: eigendecomposition failed");
        const Eigen::VectorXd e = es.eigenvalues().array().exp();
        const CMatrix &U = es.eigenvectors();
        CMatrix out = U * e.asDiagonal() * U.adjoint();
        return 0.5 * (out + out.adjoint());
    }

    const CMatrix &ensure_log(CovarianceFeature &feature, double floor)
    {
        if (!feature.logR)
            feature.logR = hermitian_log(feature.R, floor);
        return *feature.logR;
    }

    double le_distance(const CMatrix &logA, const CMatrix &logB)
    {
        if (logA.rows() != logB.rows() || logA.cols() != logB.cols())
            throw std::invalid_argument("le_distance: dimension mismatch");
        double acc = 0.0;
        const Eigen::Index n = logA.size();
        const Complex *a = logA.data();
        const Complex *b = logB.data();
        for (Eigen::Index i = 0; i < n; ++i)
            acc += std::norm(a[i] - b[i]);
        return std::sqrt(acc);
    }

    double le_distance(CovarianceFeature &a, CovarianceFeature &b) { return le_distance(ensure_log(a), ensure_log(b)); }

    DissimilarityMatrix dissimilarity_from_logs(const std::vector<CMatrix> &logs)
    {
        const auto n = static_cast<Eigen::Index>(logs.size());
        DissimilarityMatrix out;
        out.D = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index u = 0; u < n; ++u)
            for (Eigen::Index v = u + 1; v < n; ++v)
            {
                const double d = le_distance(logs[static_cast<std::size_t>(u)], logs[static_cast<std::size_t>(v)]);
                out.D(u, v) = d;
                out.D(v, u) = d;
            }
        return out;
    }

    DissimilarityMatrix dissimilarity_matrix(std::vector<CovarianceFeature> &features, double floor)
    {
        if (features.size() < 2)
            throw std::invalid_argument("dissimilarity_matrix: need at least two features");
        std::vector<CMatrix> logs;
        logs.reserve(features.size());
        for (auto &f : features)
        {
            try
            {
                logs.push_back(ensure_log(f, floor));
            }
            catch (const std::exception &e)
            {
                throw std::invalid_argument("degenerate covariance at point " + std::to_string(f.point_id) + ": " + e.what());
            }
        }
        return dissimilarity_from_logs(logs);
    }

    void write_dissimilarity_bin(const std::filesystem::path &path, const DissimilarityMatrix &d) { io::write_matrix_bin(path, d.D); }

    DissimilarityMatrix read_dissimilarity_bin(const std::filesystem::path &path) { return {io::read_matrix_bin(path)}; }

    void write_dissimilarity_csv(const std::filesystem::path &path, const DissimilarityMatrix &d)
    {
        std::string s;
        for (Eigen::Index r = 0; r < d.D.rows(); ++r)
        {
            for (Eigen::Index c = 0; c < d.D.cols(); ++c)
            {
                if (c)
                    s += ',';
                s += io::format_double(d.D(r, c));
            }
            s += '\n';
        }
        io::write_file_atomic(path, s);
    }

    namespace
    {
        void put(std::string &s, std::uint64_t v)
        {
            for (int i = 0; i < 8; ++i)
                s += static_cast<char>((v >> (8 * i)) & 0xFF);
        }
        std::uint64_t get(const std::string &s, std::size_t &at)
        {
            if (at + 8 > s.size())
                throw std::runtime_error("covariance cache truncated");
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i)
                v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
            at += 8;
            return v;
        }
    } // namespace

    void write_covariances_bin(const std::filesystem::path &path, const std::vector<CovarianceFeature> &features)
    {
        const std::uint64_t n = features.empty() ? 0 : static_cast<std::uint64_t>(features.front().R.rows());
        std::string s;
        put(s, features.size());
        put(s, n);
        for (const auto &f : features)
        {
            if (static_cast<std::uint64_t>(f.R.rows()) != n || f.R.cols() != f.R.rows())
                throw std::invalid_argument("write_covariances_bin: inconsistent matrix sizes");
            put(s, static_cast<std::uint64_t>(static_cast<std::int64_t>(f.point_id)));
            for (Eigen::Index r = 0; r < f.R.rows(); ++r)
                for (Eigen::Index c = 0; c < f.R.cols(); ++c)
                {
                    put(s, std::bit_cast<std::uint64_t>(f.R(r, c).real()));
                    put(s, std::bit_cast<std::uint64_t>(f.R(r, c).imag()));
                }
        }
        io::write_file_atomic(path, s);
    }

    std::vector<CovarianceFeature> read_covariances_bin(const std::filesystem::path &path)
    {
        const std::string s = io::read_file(path);
        std::size_t at = 0;
        const std::uint64_t count = get(s, at);
        const auto n = static_cast<Eigen::Index>(get(s, at));
        std::vector<CovarianceFeature> out(count);
        for (auto &f : out)
        {
            f.point_id = static_cast<int>(static_cast<std::int64_t>(get(s, at)));
            f.R.resize(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                {
                    const double re = std::bit_cast<double>(get(s, at));
                    const double im = std::bit_cast<double>(get(s, at));
                    f.R(r, c) = Complex(re, im);
                }
        }
        if (at != s.size())
            throw std::runtime_error("covariance cache has trailing bytes: " + path.string());
        return out;
    }
} // namespace emschart
