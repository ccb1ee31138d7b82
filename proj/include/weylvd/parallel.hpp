#pragma once

#include <cstddef>
#include <functional>

namespace weylvd {

/// Worker cap from the WEYLVD_THREADS environment variable; 0 or unset means
/// automatic (hardware concurrency, capped at 8).
unsigned worker_count();

/// Run fn(0..n-1) across workers with a static block partition.  Callers are
/// responsible for writing only to per-index slots, which keeps every
/// observable output independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace weylvd
