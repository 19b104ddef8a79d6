#pragma once

// Path-parallel map with results stored by path index, so any reduction
// done afterwards in index order is independent of the worker count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace oflab {

/// Worker count: OFLAB_THREADS if set and positive, else the hardware count.
int worker_count();

template <class F>
auto map_paths(std::uint64_t count, F&& fn) -> std::vector<std::invoke_result_t<F&, std::uint64_t>> {
    using R = std::invoke_result_t<F&, std::uint64_t>;
    std::vector<R> results(count);
    const auto workers = static_cast<std::uint64_t>(
        std::max<std::int64_t>(1, std::min<std::int64_t>(worker_count(), static_cast<std::int64_t>(count))));
    if (workers <= 1) {
        for (std::uint64_t p = 0; p < count; ++p) results[p] = fn(p);
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const auto p = next.fetch_add(1);
            if (p >= count) return;
            try {
                results[p] = fn(p);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace oflab
