#pragma once

#include <functional>

namespace specedge {

/// Worker cap: TOOL_THREADS env var if set (>=1), otherwise hardware
/// concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n).  Work items must be independent; results should
/// be written to preallocated slots so the output order (and thus every
/// downstream reduction) is deterministic regardless of thread count.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace specedge
