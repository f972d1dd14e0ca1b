// Copyright 2026 The raindrop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace raindrop {

namespace detail {
inline std::atomic<int>& worker_thread_count() {
    static std::atomic<int> count{1};
    return count;
}
}  // namespace detail

/// Set the number of worker threads used for row-parallel kernels.
/// Results are byte-identical for any setting; this only trades wall time.
inline void set_worker_threads(int n) {
    detail::worker_thread_count().store(n < 1 ? 1 : n, std::memory_order_relaxed);
}

inline int worker_threads() {
    return detail::worker_thread_count().load(std::memory_order_relaxed);
}

namespace detail {

/// Run fn(row_begin, row_end) over [0, rows), split across the configured
/// worker threads. Each chunk writes disjoint output rows, so the partition
/// cannot affect results.
template <typename Fn>
void parallel_rows(int rows, Fn&& fn) {
    const int threads = worker_thread_count().load(std::memory_order_relaxed);
    if (threads <= 1 || rows < 2 * threads) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = begin + chunk < rows ? begin + chunk : rows;
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail
}  // namespace raindrop
