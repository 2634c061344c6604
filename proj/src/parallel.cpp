#include "wsptm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wsptm {

int effective_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("WSPTM_THREADS")) {
    int limit = std::atoi(cap);
    if (limit > 0) n = std::min(n, limit);
  }
  return n;
}

void parallel_chunks(std::size_t n, int n_chunks, int threads,
                     const std::function<void(int, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  n_chunks = std::max(1, std::min<int>(n_chunks, static_cast<int>(n)));
  const std::size_t per = (n + n_chunks - 1) / n_chunks;

  auto run_chunk = [&](int c) {
    const std::size_t begin = static_cast<std::size_t>(c) * per;
    const std::size_t end = std::min(n, begin + per);
    if (begin < end) fn(c, begin, end);
  };

  const int workers = std::min(effective_threads(threads), n_chunks);
  if (workers <= 1) {
    for (int c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_chunks);  // stop handing out further chunks
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wsptm
