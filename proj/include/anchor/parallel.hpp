#pragma once

#include <cstddef>
#include <functional>

namespace anchor {

// 0 means "use hardware concurrency"; always returns at least 1.
unsigned resolve_threads(unsigned requested);

// Runs fn(0..count-1) on up to `threads` workers. Each job must write only
// its own output slot; job pickup order is arbitrary but that cannot leak
// into results. If jobs throw, the exception of the lowest job index is
// rethrown after all workers finish, so failures are thread-count
// independent too.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace anchor
