#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace conelyap {

/// Worker count: CONELYAP_THREADS if set and positive, else the hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n). Work is split in contiguous blocks; results must be
/// written by index so the outcome does not depend on scheduling. The exception of
/// the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conelyap
