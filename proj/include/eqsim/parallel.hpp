#pragma once

#include <cstdint>
#include <functional>

namespace eqsim {

/// Number of workers to use: requested if > 0, else hardware concurrency.
int resolve_thread_count(int requested);

/// Runs fn over [0,n) split into contiguous chunks, one per worker.
/// Workers must write only to disjoint, preallocated slots; any reduction is
/// done by the caller afterwards in index order, so results do not depend on
/// the thread count.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t begin, std::int64_t end)>& fn);

}  // namespace eqsim
