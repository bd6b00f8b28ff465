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

#include <bit>
#include <cstdio>
#include <string>
#include <string_view>

namespace emschart
{
    // 64-bit FNV-1a over the raw bytes of the values fed in. Only used for
    // cache keys, never for integrity.
    class Fnv1a
    {
      public:
        void add_bytes(const void *data, std::size_t n)
        {
            const auto *p = static_cast<const unsigned char *>(data);
            for (std::size_t i = 0; i < n; ++i)
            {
                state_ ^= p[i];
                state_ *= 0x100000001B3ull;
            }
        }
        void add(std::uint64_t v) { add_bytes(&v, sizeof v); }
        void add(double v)
        {
            if (v == 0.0)
                v = 0.0; // fold -0.0
            add(std::bit_cast<std::uint64_t>(v));
        }
        void add(const Vec3 &v)
        {
            add(v.x());
            add(v.y());
            add(v.z());
        }
        void add(std::string_view s)
        {
            add(static_cast<std::uint64_t>(s.size()));
            add_bytes(s.data(), s.size());
        }
        std::uint64_t value() const { return state_; }

      private:
        std::uint64_t state_ = 0xCBF29CE484222325ull;
    };

    inline std::string hex64(std::uint64_t v)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }
} // namespace emschart
