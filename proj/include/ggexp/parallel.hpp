#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace ggexp {

/// Worker count for internal loops. GGEXP_THREADS caps it; 0 or unset means
/// std::thread::hardware_concurrency().
unsigned thread_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous blocks, one
/// per worker; callers write results into index-addressed slots so the outcome
/// never depends on scheduling. The exception of the lowest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ggexp
