#pragma once

#include <cstddef>
#include <functional>

namespace entconc {

/// Worker count: ENTCONC_THREADS if set to a positive integer, otherwise
/// std::thread::hardware_concurrency().
std::size_t thread_count();

/// Calls body(i) for i in [0, n). Each index runs exactly once; callers write
/// into preallocated slots so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace entconc
