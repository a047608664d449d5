#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tvws {

// Process-wide worker count used by parallel_for. 0 selects hardware concurrency.
void set_worker_count(unsigned n);
unsigned worker_count();

namespace detail {
// Set inside parallel_for workers; nested loops then run inline.
inline thread_local bool in_worker = false;
}  // namespace detail

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, so any
// per-index output written by fn is independent of scheduling. The first
// exception (lowest chunk) is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = detail::in_worker ? 1 : std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            detail::in_worker = true;
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tvws
