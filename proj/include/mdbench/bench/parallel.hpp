#pragma once

#include <cstddef>
#include <functional>

namespace mdbench {

/// Worker count: MDBENCH_THREADS when set to a positive integer, otherwise
/// the number of logical processors (at least 1).
std::size_t worker_count();

/// Runs body(0..count-1) on up to `workers` threads. Each index runs exactly
/// once; the first exception (lowest index) is rethrown after all finish.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace mdbench
