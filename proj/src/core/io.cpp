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

#include "io.hpp"

#include "errors.hpp"

#include <openssl/evp.h>

#include <bit>
#include <charconv>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace emschart::io
{
    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        if (v == 0.0)
            return "0";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        if (res.ec != std::errc())
            throw std::runtime_error("format_double: conversion failed");
        return std::string(buf, res.ptr);
    }

    double parse_double(std::string_view s)
    {
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw std::invalid_argument("parse_double: not a number: '" + std::string(s) + "'");
        return v;
    }

    std::size_t CsvTable::column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw std::invalid_argument("csv: missing column '" + std::string(name) + "'");
    }

    namespace
    {
        CsvRow split(const std::string &line)
        {
            CsvRow row;
            std::string cell;
            std::istringstream is(line);
            while (std::getline(is, cell, ','))
                row.push_back(cell);
            if (!line.empty() && line.back() == ',')
                row.emplace_back();
            return row;
        }
    } // namespace

    CsvTable read_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open " + path.string());
        CsvTable t;
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error("empty csv file " + path.string());
        t.header = split(line);
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            t.rows.push_back(split(line));
            if (t.rows.back().size() != t.header.size())
                throw std::runtime_error("csv row width mismatch in " + path.string());
        }
        return t;
    }

    std::string join_csv(const CsvRow &row)
    {
        std::string s;
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                s += ',';
            s += row[i];
        }
        return s;
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file_atomic(const std::filesystem::path &path, std::string_view contents)
    {
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp." + std::to_string(::getpid());
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + tmp.string());
            out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
            if (!out)
                throw std::runtime_error("short write to " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    std::string git_blob_sha1(std::string_view contents)
    {
        const std::string head = "blob " + std::to_string(contents.size()) + std::string(1, '\0');
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_MD_CTX *ctx = EVP_MD_CTX_new();
        if (!ctx)
            throw std::runtime_error("sha1: context allocation failed");
        const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                        EVP_DigestUpdate(ctx, head.data(), head.size()) == 1 &&
                        EVP_DigestUpdate(ctx, contents.data(), contents.size()) == 1 &&
                        EVP_DigestFinal_ex(ctx, md, &len) == 1;
        EVP_MD_CTX_free(ctx);
        if (!ok)
            throw std::runtime_error("sha1: digest failed");
        static constexpr char digits[] = "0123456789abcdef";
        std::string hex;
        hex.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i)
        {
            hex += digits[md[i] >> 4];
            hex += digits[md[i] & 0xF];
        }
        return hex;
    }

    namespace
    {
        void put_u64(std::string &s, std::uint64_t v)
        {
            for (int i = 0; i < 8; ++i)
                s += static_cast<char>((v >> (8 * i)) & 0xFF);
        }

        std::uint64_t get_u64(const std::string &s, std::size_t at)
        {
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i)
                v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
            return v;
        }
    } // namespace

    void write_matrix_bin(const std::filesystem::path &path, const Eigen::MatrixXd &m)
    {
        if (m.rows() != m.cols())
            throw std::invalid_argument("write_matrix_bin: matrix must be square");
        std::string s;
        const auto n = static_cast<std::uint64_t>(m.rows());
        s.reserve(8 + 8 * n * n);
        put_u64(s, n);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                put_u64(s, std::bit_cast<std::uint64_t>(m(r, c)));
        write_file_atomic(path, s);
    }

    Eigen::MatrixXd read_matrix_bin(const std::filesystem::path &path)
    {
        const std::string s = read_file(path);
        if (s.size() < 8)
            throw std::runtime_error("truncated matrix file " + path.string());
        const std::uint64_t n = get_u64(s, 0);
        if (s.size() != 8 + 8 * n * n)
            throw std::runtime_error("matrix file size does not match header: " + path.string());
        Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        std::size_t at = 8;
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c, at += 8)
                m(r, c) = std::bit_cast<double>(get_u64(s, at));
        return m;
    }

    DirectoryLock::DirectoryLock(const std::filesystem::path &dir) : path_(dir / ".emschart.lock")
    {
        std::filesystem::create_directories(dir);
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0)
            throw LockError("output directory is locked by another run: " + path_.string());
        ::close(fd);
    }

    DirectoryLock::~DirectoryLock()
    {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
} // namespace emschart::io
