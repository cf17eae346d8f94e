#ifndef SUBCRIT_PARALLEL_HPP
#define SUBCRIT_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace subcrit {

/// Runs fn(0..count-1) across up to `workers` threads (0 = hardware count).
/// Work items must write to disjoint slots; results are then independent of
/// the worker count and interleaving.
inline void parallel_for(std::int64_t count, int workers,
                         const std::function<void(std::int64_t)>& fn) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int n_workers = workers > 0 ? workers : hw;
    if (static_cast<std::int64_t>(n_workers) > count)
        n_workers = static_cast<int>(count);

    if (n_workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace subcrit

#endif
