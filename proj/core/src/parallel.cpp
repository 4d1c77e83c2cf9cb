#include "knt/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "knt/errors.hpp"

namespace knt {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (requested < 0) {
    if (const char* env = std::getenv("KNT_THREADS")) {
      char* end = nullptr;
      const long value = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || value < 0) {
        fail(ErrorKind::InvalidArgument,
             "KNT_THREADS must be a nonnegative integer, got \"" +
                 std::string(env) + "\"");
      }
      if (value > 0) return static_cast<int>(value);
      // 0 = auto, fall through.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::min(threads, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count, std::memory_order_relaxed);  // drain remaining work
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 0; t < workers - 1; ++t) pool.emplace_back(work);
  work();
  for (auto& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace knt
