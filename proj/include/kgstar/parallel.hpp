#pragma once

#include <cstddef>
#include <functional>

namespace kgstar {

/// Calls fn(i) for every i in [0, n) on up to `jobs` worker threads. Callers
/// write results into slot i, so output order never depends on scheduling.
/// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace kgstar
