#pragma once

#include <functional>

#include "hubmix/types.hpp"

namespace hubmix {

// Runs fn(i) for every i in [0, count) on `threads` workers (0 = hardware
// count) and blocks until all are done. Indices are handed out through an
// atomic counter, so the set of (i, result) pairs is schedule-independent.
// The first exception thrown by any worker is rethrown in the caller.
void parallel_for_index(i64 count, int threads, const std::function<void(i64)>& fn);

int resolve_thread_count(int requested);

}  // namespace hubmix
