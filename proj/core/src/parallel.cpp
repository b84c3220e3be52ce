#include "tctv/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace tctv {

namespace {

int read_worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("TCTV_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < n) n = cap;
  }
  return n;
}

thread_local bool in_parallel_region = false;

}  // namespace

int worker_count() {
  static const int n = read_worker_count();
  return n;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  const int workers = worker_count();
  if (workers == 1 || n == 1 || in_parallel_region) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<std::int64_t>(workers, n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) {
    pool.emplace_back([&, w] {
      in_parallel_region = true;
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= n || failed.load()) break;
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
          failed.store(true);
          break;
        }
      }
      in_parallel_region = false;
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) {
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
}

}  // namespace tctv
