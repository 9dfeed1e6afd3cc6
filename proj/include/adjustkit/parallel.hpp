#pragma once

#include <cstddef>
#include <functional>

namespace adjustkit {

/// Resolve a requested worker count: positive values are taken as-is, 0 falls
/// back to ADJUSTKIT_THREADS and then to the hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Run body(begin, end) over contiguous chunks of [0, count). Chunk boundaries
/// depend only on count and the worker count, and each index is visited once,
/// so results written by index are independent of scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace adjustkit
