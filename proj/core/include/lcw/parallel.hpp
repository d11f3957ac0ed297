#pragma once

#include <cstddef>
#include <functional>

namespace lcw {

// Worker count: LCW_THREADS if set (>= 1), otherwise the hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Each index is owned by exactly one worker, so writes to
// per-index slots give results independent of the schedule.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace lcw
