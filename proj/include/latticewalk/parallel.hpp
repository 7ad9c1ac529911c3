#pragma once

#include <cstddef>
#include <functional>

namespace latticewalk {

/// Worker count: hardware concurrency, capped by LATTICEWALK_THREADS.
unsigned thread_count();

/// Calls body(begin, end) on contiguous chunks of [0, count). Chunk
/// boundaries depend only on count and thread_count(), and every index is
/// handled by exactly one call, so per-index results are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace latticewalk
