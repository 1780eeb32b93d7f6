#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace placenames {

// Run f(0..n-1) on up to `jobs` worker threads. Tasks must write only to
// their own output slots; the first escaped exception is rethrown on the
// caller thread after all workers join.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(n, jobs > 0 ? static_cast<std::size_t>(jobs)
                                          : std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n || failed.load(std::memory_order_relaxed)) return;
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace placenames
