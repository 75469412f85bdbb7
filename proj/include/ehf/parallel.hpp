#pragma once

#include <cstddef>
#include <functional>

namespace ehf {

/// Worker count: EHF_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t thread_count();

/// Run body(i) for i in [0, n). Each index runs exactly once; the first
/// exception thrown by any body is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ehf
