#include "plg/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace plg {

int worker_count() {
  int n = 0;
  if (const char* env = std::getenv("PLG_THREADS")) {
    n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

void parallel_chunks(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), n));
  if (workers == 1) {
    fn(0, n);
    return;
  }

  std::mutex mu;
  std::exception_ptr first_error;
  auto run = [&](std::int64_t lo, std::int64_t hi) {
    try {
      fn(lo, hi);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    std::int64_t lo = w * chunk;
    if (lo >= n) break;
    pool.emplace_back(run, lo, std::min(n, lo + chunk));
  }
  run(0, std::min(n, chunk));
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace plg
