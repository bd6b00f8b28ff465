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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace emschart
{
    /// Worker count for a request; 0 means one per hardware thread.
    inline unsigned resolve_threads(unsigned requested)
    {
        if (requested > 0)
            return requested;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Calls fn(i) for i in [0, n) on up to `threads` workers. Items are
    /// claimed dynamically; results must be written to per-index slots. The
    /// first exception thrown by any item is rethrown after all workers stop.
    template <class Fn>
    void parallel_for(std::size_t n, unsigned threads, Fn &&fn)
    {
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&] {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load())
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
} // namespace emschart
