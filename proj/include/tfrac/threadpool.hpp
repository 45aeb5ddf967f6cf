#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tfrac {

inline unsigned effective_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Static contiguous partition of [0, count) over `threads` workers. Results
// must be written to per-index slots so the outcome is independent of the
// thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    unsigned t = effective_threads(threads);
    if (t <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    t = std::min<std::size_t>(t, count);
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < t; ++w) {
        std::size_t lo = count * w / t;
        std::size_t hi = count * (w + 1) / t;
        workers.emplace_back([&, lo, hi]() {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace tfrac
