#pragma once

#include <functional>

namespace knt {

// Resolves the worker count: `requested` wins if positive; otherwise the
// KNT_THREADS environment variable (0 or unset = auto = hardware concurrency).
int resolve_threads(int requested = -1);

// Runs fn(i) for i in [0, count) on `threads` workers pulling indices from a
// shared atomic counter.  Items must not share mutable state; because every
// item writes only its own slot, results are identical for any thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace knt
