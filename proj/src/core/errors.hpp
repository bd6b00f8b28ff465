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

#include <stdexcept>
#include <string>

namespace emschart
{
    /// Another run holds the output directory.
    class LockError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    /// An input artifact expected from an earlier command is absent.
    class MissingArtifactError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };
} // namespace emschart
