#ifndef SCF_PARALLEL_HPP
#define SCF_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace scf {

// Worker count for block-parallel loops: SCFH_THREADS if set, otherwise the
// hardware concurrency, clamped to [1, 8].
inline unsigned worker_thread_count() {
  if (const char* env = std::getenv("SCFH_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 64) return unsigned(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return hw > 8 ? 8 : hw;
}

// Runs fn(i) for i in [0, n). Work items must be independent; callers keep
// determinism by writing results into index i of a preallocated buffer.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
  unsigned threads = worker_thread_count();
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (threads > n) threads = unsigned(n);

  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace scf

#endif  // SCF_PARALLEL_HPP
