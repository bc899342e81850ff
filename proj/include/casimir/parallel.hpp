#pragma once

#include <cstddef>
#include <functional>

namespace casimir {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Each index is executed
// exactly once; results written by index keep the output order deterministic.
// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

int default_jobs();

}  // namespace casimir
