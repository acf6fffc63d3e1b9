#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rydfloq {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Items are claimed
// dynamically; each writes only its own slot, so results never depend on
// scheduling. If any item throws, the exception of the lowest index is
// rethrown after all threads have joined.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int workers, F&& fn) {
    std::vector<T> out(n);
    parallel_for(n, workers, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

// Worker count used when the caller passes 0.
int default_workers();

}  // namespace rydfloq
