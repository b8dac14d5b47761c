#pragma once

#include <cstddef>
#include <functional>

namespace zitterdyn {

/// Worker count: ZITTERDYN_THREADS if set to a positive integer, else the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace zitterdyn
