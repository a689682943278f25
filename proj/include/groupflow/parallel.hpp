#pragma once

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace groupflow {

/// Worker count: GROUPFLOW_THREADS if set (and >= 1), else the hardware
/// concurrency. Jobs must write only to their own output slot, which keeps
/// results independent of scheduling and therefore bit-reproducible.
inline int thread_budget() {
    if (const char* env = std::getenv("GROUPFLOW_THREADS")) {
        int n = 0;
        const char* end = env;
        while (*end) ++end;
        auto [ptr, ec] = std::from_chars(env, end, n);
        if (ec == std::errc{} && ptr == end && n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? int(hw) : 1;
}

/// Runs fn(0..n_jobs-1), pulling jobs from a shared counter. The first
/// exception aborts the pool and is rethrown on the calling thread.
inline void parallel_for(int n_jobs, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_budget(), n_jobs);
    if (workers <= 1) {
        for (int j = 0; j < n_jobs; ++j) fn(j);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const int j = next.fetch_add(1, std::memory_order_relaxed);
            if (j >= n_jobs) return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace groupflow
