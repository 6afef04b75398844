#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace vempb {

/// Number of worker threads used by element loops. 0 selects hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n) split into contiguous static chunks.
/// The first exception thrown by any worker is rethrown on the caller's thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vempb
