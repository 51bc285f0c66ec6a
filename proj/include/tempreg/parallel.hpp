#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tempreg {

/**
 * Runs fn(0..n-1) across up to n_threads workers (hardware concurrency when
 * 0). Each index must write only to its own slot of any shared output, so
 * results are independent of scheduling.
 */
inline void parallel_for_index(int n, int n_threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                     : std::thread::hardware_concurrency();
    if (workers < 1) workers = 1;
    if (workers > static_cast<unsigned>(n)) workers = static_cast<unsigned>(n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace tempreg
