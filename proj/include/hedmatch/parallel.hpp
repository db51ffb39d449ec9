#pragma once

#include <cstddef>
#include <functional>

namespace hedmatch {

// Worker count from HEDMATCH_THREADS (0 or unset = hardware concurrency).
unsigned configured_threads();

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
// so callers that write only to slot i get results identical to a serial
// loop. Small workloads (n * cost_hint below a threshold) stay serial.
void parallel_for(std::size_t n, std::size_t cost_hint,
                  const std::function<void(std::size_t)>& body);

}  // namespace hedmatch
