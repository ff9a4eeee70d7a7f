#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hebbswarm {

// Runs task(0..count-1) on up to `threads` workers. Tasks write results by
// index, so scheduling order never leaks into outputs. The first exception is
// rethrown on the calling thread after all workers join.
inline void parallel_for(int threads, long count,
                         const std::function<void(long)>& task) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (long i = 0; i < count; ++i) task(i);
    return;
  }

  const int n = static_cast<int>(std::min<long>(threads, count));
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);  // drain remaining work
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hebbswarm
