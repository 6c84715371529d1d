#pragma once

// Index-based parallel loop.  Results must land in preallocated slots keyed
// by the index, which keeps output independent of scheduling; the first
// exception thrown by any worker is rethrown on the calling thread.

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace charsum {

inline void parallel_for(size_t count, int workers, const std::function<void(size_t)>& body) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const size_t pool_size = std::min<size_t>(static_cast<size_t>(workers), count);
    std::atomic<size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (size_t w = 0; w < pool_size; ++w)
        pool.emplace_back([&] {
            while (true) {
                const size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace charsum
