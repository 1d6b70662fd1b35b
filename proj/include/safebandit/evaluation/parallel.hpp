#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace safebandit {

/// Runs work(0..count-1) on `workers` threads and feeds the results to
/// merge strictly in index order, so merged state is identical for any
/// worker count. The first exception wins and is rethrown on the caller.
template <typename Result>
void parallel_for_ordered(int count, int workers,
                          const std::function<Result(int)>& work,
                          const std::function<void(int, Result&&)>& merge) {
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) merge(i, work(i));
    return;
  }

  std::atomic<int> next{0};
  std::mutex mutex;
  std::map<int, Result> pending;
  int next_to_merge = 0;
  std::exception_ptr failure;

  const auto worker_loop = [&] {
    while (true) {
      const int index = next.fetch_add(1);
      if (index >= count) return;
      try {
        Result result = work(index);
        std::lock_guard<std::mutex> lock(mutex);
        pending.emplace(index, std::move(result));
        while (!pending.empty() && pending.begin()->first == next_to_merge) {
          merge(next_to_merge, std::move(pending.begin()->second));
          pending.erase(pending.begin());
          ++next_to_merge;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const int spawn = std::min(workers, count);
  pool.reserve(spawn);
  for (int w = 0; w < spawn; ++w) pool.emplace_back(worker_loop);
  for (std::thread& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace safebandit
