#pragma once

#include <cstddef>
#include <functional>

namespace soilab {

/// Worker count: SOI_LAB_THREADS when set to a positive integer, else the hardware concurrency.
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The first exception thrown by any
/// call is rethrown after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers = worker_count());

}  // namespace soilab
