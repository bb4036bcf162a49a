#pragma once

#include <cstddef>
#include <functional>

namespace berglab {

/// Worker count: BERGLAB_THREADS when set, hardware concurrency otherwise.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Results must go to slots indexed by i, so the
/// outcome does not depend on scheduling. Nested calls run serially. The first
/// exception thrown by a body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace berglab
