#pragma once

#include <cstddef>
#include <functional>

namespace interweave {

// Worker count from INTERWEAVE_THREADS, else the hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
// write into slot i so results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace interweave
