#pragma once

#include <cstddef>
#include <functional>

namespace projq {

// Runs fn(i) for i in [0, n) across `threads` workers with a static block
// partition. Each index must write only to its own output slot; callers do
// any reduction afterwards in index order, so results are bit-identical
// regardless of the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

} // namespace projq
