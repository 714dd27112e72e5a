#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace recnet {

/// Thread count to use when the caller asks for `requested` (0 = automatic).
/// Automatic reads RECNET_THREADS, then falls back to hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Calls fn(i) for every i in [0, count). Work is split into contiguous blocks,
/// one per thread; each i is written by exactly one call so results stored by
/// index are independent of the thread count. If several calls throw, the
/// exception from the lowest index is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = std::min(count, w * block);
        const std::size_t end = std::min(count, begin + block);
        pool.emplace_back(run_block, begin, end);
    }
    run_block(0, std::min(count, block));
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace recnet
