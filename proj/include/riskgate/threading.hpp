#pragma once

#include <cstddef>
#include <functional>

namespace riskgate {

/// Number of worker threads: min(hardware concurrency, RISKGATE_THREADS when
/// set). Always at least 1.
std::size_t thread_budget();

/// Runs fn(i) for i in [0, count) across the thread budget with static
/// partitioning. fn must only write to slots owned by its own index so that
/// results are independent of the partitioning.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace riskgate
