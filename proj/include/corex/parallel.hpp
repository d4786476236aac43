#pragma once

#include <cstddef>
#include <functional>

namespace corex {

// Worker count from COREX_THREADS, else the hardware concurrency.
std::size_t thread_count();

// Calls fn(begin, end) over disjoint chunks of [0, n). Chunks never share
// output, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace corex
