#pragma once

#include <cstddef>
#include <functional>

namespace quasifree {

/// QUASIFREE_WORKERS when it holds a positive integer, otherwise the hardware
/// concurrency (at least 1).
int worker_count();

/// Calls task(i) for every i in [0, count) on up to `workers` threads. Tasks
/// must only write to storage owned by their index. The first exception thrown
/// by any task is rethrown after all threads have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, int workers = 0);

}  // namespace quasifree
