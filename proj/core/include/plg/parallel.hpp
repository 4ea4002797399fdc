#ifndef PLG_PARALLEL_HPP
#define PLG_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace plg {

// Number of workers used by quantifier loops and exhaustive searches.
// Bounded by the PLG_THREADS environment variable when set; defaults to the
// hardware concurrency.  Always at least 1.
int worker_count();

// Splits [0, n) into contiguous chunks and runs fn(lo, hi) on each, using up
// to worker_count() threads.  fn must be safe to call concurrently.
// Exceptions thrown by fn are rethrown on the calling thread (first one wins).
void parallel_chunks(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace plg

#endif
