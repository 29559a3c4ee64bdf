// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace landpatch::detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for every i in [0, n). Work is handed out in `chunk`-sized
/// blocks from an atomic cursor, so the assignment of items to threads is
/// arbitrary; callers must make fn(i) write only to slot i of some
/// preallocated output. The first exception thrown by any worker is
/// rethrown on the calling thread after all workers join.
template <typename Fn>
void parallel_for(std::size_t n, int workers, std::size_t chunk, Fn&& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    int threads = resolve_workers(workers);
    std::size_t max_useful = (n + chunk - 1) / chunk;
    if (static_cast<std::size_t>(threads) > max_useful) threads = static_cast<int>(max_useful);

    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto body = [&] {
        for (;;) {
            std::size_t begin = cursor.fetch_add(chunk);
            if (begin >= n) return;
            std::size_t end = begin + chunk < n ? begin + chunk : n;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();

    if (error) std::rethrow_exception(error);
}

}  // namespace landpatch::detail
