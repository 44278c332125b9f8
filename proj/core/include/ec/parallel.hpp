#pragma once

#include <cstdint>
#include <functional>

namespace ec {

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Work is handed out by atomic counter; results must be written
// to per-index slots by the caller so the outcome is independent of the
// thread count.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn);

} // namespace ec
