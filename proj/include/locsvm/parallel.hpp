#pragma once

#include <cstddef>
#include <functional>

namespace locsvm {

// Worker count for a requested degree (0 = hardware concurrency).
int effective_threads(int requested);

// Runs fn(i) for i in [0, count). Iterations must write only to disjoint
// slots; scheduling order is unspecified, so results must not depend on it.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace locsvm
