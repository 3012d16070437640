// SPDX-License-Identifier: Apache-2.0
//
// selmimo - selective uplink training simulator for massive MIMO
// Copyright (C) 2026 The selmimo authors
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

#ifndef SELMIMO_PARALLEL_HPP
#define SELMIMO_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace selmimo
{

/// Runs fn(0) ... fn(n_tasks-1) on up to n_threads worker threads. Tasks
/// must write to disjoint output slots; the work-stealing order does not
/// affect results. The first exception thrown by a task is rethrown on the
/// calling thread after all workers finish.
inline void parallel_for(std::size_t n_tasks, int n_threads, const std::function<void(std::size_t)> &fn)
{
    if (n_threads <= 1 || n_tasks <= 1)
    {
        for (std::size_t i = 0; i < n_tasks; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(n_tasks); // drain remaining work
                return;
            }
        }
    };

    const auto n_workers = static_cast<std::size_t>(n_threads);
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
        threads.emplace_back(worker);
    for (auto &t : threads)
        t.join();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace selmimo

#endif
