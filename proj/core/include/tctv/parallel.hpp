#pragma once

#include <cstdint>
#include <functional>

namespace tctv {

// Worker count for data-parallel loops: min(hardware threads, TCTV_THREADS).
// TCTV_THREADS is read once per process.
int worker_count();

// Runs fn(i) for i in [0, n). Iterations must be independent; results must be
// written to disjoint slots so the outcome is schedule-independent. Nested
// calls from inside a parallel region run serially.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace tctv
