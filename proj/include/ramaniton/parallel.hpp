#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace ramaniton {

/// Worker cap: RAMANITON_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Indices are split into contiguous blocks,
/// one per worker, so callers that write result[i] get output independent of
/// the worker count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ramaniton
