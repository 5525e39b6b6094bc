/*
   Copyright 2026 The fkpp-qsd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fkpp {

/// Environment variable that caps the worker count.
inline constexpr const char* kMaxWorkersEnv = "FKPP_QSD_MAX_WORKERS";

/// requested <= 0 means hardware concurrency; the env cap applies last.
inline int resolve_workers(int requested)
{
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* cap = std::getenv(kMaxWorkersEnv)) {
        const int c = std::atoi(cap);
        if (c > 0) n = std::min(n, c);
    }
    return n;
}

/**
 * Evaluates fn(i) for i in [0, n) on a pool of workers and returns the results
 * in index order. Each task must depend on its index only, which makes the
 * output independent of the worker count.
 */
template <class Result, class Fn>
std::vector<Result> run_indexed(std::size_t n, int workers, Fn&& fn)
{
    std::vector<Result> out(n);
    const int w = std::max(1, std::min<int>(resolve_workers(workers), static_cast<int>(n)));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int k = 0; k < w; ++k) pool.emplace_back(work);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace fkpp
