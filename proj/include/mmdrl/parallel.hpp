#pragma once

#include <cstddef>
#include <functional>

namespace mmdrl {

// Worker count from MMDRL_WORKERS, else the hardware concurrency (at least 1).
unsigned worker_count();

// Calls fn(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any call is rethrown after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned workers = worker_count());

}  // namespace mmdrl
