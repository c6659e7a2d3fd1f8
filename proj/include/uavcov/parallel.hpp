#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace uavcov {

/// Worker count: `requested` when nonzero, otherwise the hardware thread
/// count; capped by COVERAGE_THREADS when set. Never less than 1.
unsigned worker_count(unsigned requested = 0);

/// Runs `task(batch, first_trial, count)` for every batch of `batch_size`
/// trials and returns the per-batch results in batch order. The caller
/// merges them sequentially, which keeps reductions independent of the
/// number of workers.
template <class Result, class Task>
std::vector<Result> run_batches(std::uint64_t trials, std::uint64_t batch_size, unsigned workers,
                                Task&& task)
{
    const std::uint64_t n_batches = (trials + batch_size - 1) / batch_size;
    std::vector<Result> results(n_batches);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_batches) return;
            const std::uint64_t first = b * batch_size;
            const std::uint64_t count = std::min(batch_size, trials - first);
            try {
                results[b] = task(b, first, count);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_batches);
                return;
            }
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(workers == 0 ? 1 : workers, n_batches));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace uavcov
