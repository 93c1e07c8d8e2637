#pragma once

#include <cstddef>
#include <functional>

namespace vpmc {

// Worker cap: VPMC_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, n). Indices are split into contiguous blocks, one
// per worker; body must only write state owned by index i, so results do not
// depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_per_thread = 1);

}  // namespace vpmc
