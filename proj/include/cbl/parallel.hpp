#pragma once

#include <functional>

namespace cbl {

/// runs f(0..n-1) on up to `jobs` threads; jobs ≤ 1 runs in order on the caller
void parallel_for(int n, int jobs, const std::function<void(int)>& f);

}  // namespace cbl
