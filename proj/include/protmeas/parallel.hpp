#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace protmeas {

/// Worker count: hardware concurrency, capped by PROTMEAS_THREADS when set.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) across worker threads. Each index is
/// visited exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Ordered results of fn(i).
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace protmeas
