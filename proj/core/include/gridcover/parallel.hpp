#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gridcover {

inline unsigned effective_jobs(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, count) across `jobs` worker threads
/// (0 = hardware concurrency). Indices are claimed from a shared atomic
/// counter; callers make results deterministic by writing to index i of a
/// preallocated output, never by accumulating in claim order. The first
/// exception thrown by any body is rethrown on the calling thread.
inline void parallel_for_index(std::uint64_t count, unsigned jobs,
                               const std::function<void(std::uint64_t)>& body) {
    const unsigned workers = effective_jobs(jobs);
    if (count == 0) return;
    if (workers == 1 || count == 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace gridcover
