#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace purechain {

// Runs fn(i) for every i in [0, count) across `workers` threads. Work is
// index-addressed, so results are identical for any worker count as long as
// fn(i) writes only to slot i of its output.
inline void parallel_for(std::uint64_t count, int workers,
                         const std::function<void(std::uint64_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::uint64_t n_threads = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers),
                                                      count);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n_threads);
    for (std::uint64_t t = 0; t < n_threads; ++t) {
        threads.emplace_back([&, t]() {
            std::uint64_t begin = count * t / n_threads;
            std::uint64_t end = count * (t + 1) / n_threads;
            try {
                for (std::uint64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (std::thread& thread : threads) thread.join();
    for (const std::exception_ptr& error : errors) {
        if (error) std::rethrow_exception(error);
    }
}

}  // namespace purechain
