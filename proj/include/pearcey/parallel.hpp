#pragma once

#include <cstddef>
#include <functional>

namespace pearcey {

// Worker count: PEARCEY_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n) on up to thread_count() threads. The first exception
// thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pearcey
