#pragma once
// Minimal fork-join helper. ENTLOC_THREADS caps the worker count.

#include <functional>

namespace entloc {

int worker_count();

// Runs fn(0..n-1) across workers. fn must be safe to call concurrently;
// iteration order is unspecified but the index set is exactly 0..n-1.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace entloc
