#pragma once

#include <cstddef>
#include <functional>

namespace specpol {

/// Worker count from SPECPOL_THREADS (falls back to hardware concurrency).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
/// so writes to per-index slots are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace specpol
