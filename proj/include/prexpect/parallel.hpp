#pragma once

#include <cstddef>
#include <functional>

namespace prexpect {

/// Worker count: hardware concurrency, capped by PREXPECT_THREADS.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; the
/// first exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace prexpect
