#pragma once

#include <cstddef>
#include <functional>

namespace factornet {

/// Worker count from the FACTORNET_THREADS environment variable, else hardware concurrency.
std::size_t default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is executed exactly once;
/// results must be written to per-index slots so the outcome does not depend on scheduling.
/// If any body throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace factornet
