#pragma once

#include <cstddef>
#include <functional>

namespace aggre {

/// Worker count: hardware concurrency, capped by the AGGRE_THREADS variable.
std::size_t thread_count();

/// Runs fn(i) for i in [0, n). Each index is handled by exactly one worker and
/// results are written per index, so the output does not depend on the split.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace aggre
