// SPDX-License-Identifier: Apache-2.0
//
// nearfield: near-field channel modelling and beamforming toolkit
// Copyright (C) 2026 The nearfield authors
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

#include "nearfield/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nearfield
{
    namespace
    {
        std::atomic<unsigned> g_threads{1};
    }

    void set_thread_count(unsigned count) noexcept
    {
        if (count == 0)
            count = std::max(1u, std::thread::hardware_concurrency());
        g_threads.store(count);
    }

    unsigned thread_count() noexcept { return g_threads.load(); }

    void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min<std::size_t>(thread_count(), count);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto run = [&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(count);
                }
            }
        };

        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(run);
        run();
        pool.clear();
        if (failure)
            std::rethrow_exception(failure);
    }
} // namespace nearfield
