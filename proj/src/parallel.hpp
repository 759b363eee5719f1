#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "parvol/numeric.hpp"

namespace parvol::detail {

/// Splits [begin, end) into one contiguous range per worker and runs body(worker, lo, hi).
/// The first exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_ranges(long begin, long end, Body&& body) {
    const long total = end - begin;
    if (total <= 0) return;
    const int workers = static_cast<int>(std::min<long>(thread_count(), total));
    if (workers <= 1) {
        body(0, begin, end);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        const long lo = begin + total * w / workers;
        const long hi = begin + total * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] {
            try {
                body(w, lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace parvol::detail
