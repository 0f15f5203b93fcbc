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

namespace fracvol {

/// Worker count: FRACVOL_THREADS if set and positive, otherwise the hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("FRACVOL_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n). Each index is processed exactly once; callers
/// write results into slot i so the outcome does not depend on scheduling.
/// The first exception thrown by a task is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = thread_count()) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace fracvol
