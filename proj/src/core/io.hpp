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

#include "common.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace emschart::io
{
    /// Shortest decimal that round-trips to the same double. Infinities are
    /// written as "inf" / "-inf".
    std::string format_double(double v);

    /// Inverse of format_double.
    double parse_double(std::string_view s);

    using CsvRow = std::vector<std::string>;

    struct CsvTable
    {
        CsvRow header;
        std::vector<CsvRow> rows;

        /// Column index by name; throws if absent.
        std::size_t column(std::string_view name) const;
    };

    /// Minimal comma-separated reader (no quoting; the project never writes commas in fields).
    CsvTable read_csv(const std::filesystem::path &path);

    std::string join_csv(const CsvRow &row);

    std::string read_file(const std::filesystem::path &path);

    /// Writes via a temporary sibling and rename so readers never see a partial file.
    void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

    /// Git blob id: SHA-1 of "blob <size>\0" + contents, lowercase hex.
    std::string git_blob_sha1(std::string_view contents);

    /// Binary square matrix: uint64 little-endian N, then N*N row-major float64.
    void write_matrix_bin(const std::filesystem::path &path, const Eigen::MatrixXd &m);
    Eigen::MatrixXd read_matrix_bin(const std::filesystem::path &path);

    /// Exclusive lock file; throws if the directory is already locked.
    class DirectoryLock
    {
      public:
        explicit DirectoryLock(const std::filesystem::path &dir);
        ~DirectoryLock();
        DirectoryLock(const DirectoryLock &) = delete;
        DirectoryLock &operator=(const DirectoryLock &) = delete;

      private:
        std::filesystem::path path_;
    };
} // namespace emschart::io
