#pragma once

#include <cstddef>
#include <functional>

namespace dnls {

/// Worker count: hardware concurrency, capped by DNLS_LAB_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Each index is visited exactly once; results must be written by index so
/// output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dnls
