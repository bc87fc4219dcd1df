#include "levylab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>

namespace levylab {

void for_each_index(std::size_t n, int workers,
                    const std::function<void(std::size_t)>& fn) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long long i = 0; i < (long long)(n); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      fn(std::size_t(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace levylab
