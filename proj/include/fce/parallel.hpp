#pragma once

#include <cstddef>
#include <functional>

namespace fce {

// Worker count: FCE_THREADS if set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
unsigned worker_count();

// Calls body(i) for every i in [0, n), spread over `threads` workers in
// contiguous blocks. body must only write to state owned by index i.
// The first exception thrown by any worker is rethrown after all join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = worker_count());

}  // namespace fce
