#pragma once

#include <cstddef>
#include <functional>

namespace feec {

/// Worker count from the FEEC_THREADS environment variable; defaults to the
/// hardware concurrency. Results never depend on it.
int thread_count();

/// Calls f(i) for i in [0, n) on thread_count() workers. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace feec
