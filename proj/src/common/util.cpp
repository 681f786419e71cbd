#include "common/util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace cornerfem {

namespace {
std::atomic<int> g_threads{0};  // 0 = not set yet
}

int num_threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("CORNERFEM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) {
      g_threads.store(v);
      return v;
    }
  }
  g_threads.store(1);
  return 1;
}

void set_num_threads(int n) { g_threads.store(std::max(1, n)); }

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     std::size_t* n_chunks_out) {
  std::size_t workers = std::size_t(num_threads());
  if (workers <= 1 || n < 64) {
    if (n_chunks_out) *n_chunks_out = 1;
    if (n > 0) fn(0, 0, n);
    return;
  }
  workers = std::min(workers, n);
  std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::size_t nchunks = 0;
  for (std::size_t begin = 0; begin < n; begin += chunk, ++nchunks) {
    std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back(fn, nchunks, begin, end);
  }
  for (auto& t : pool) t.join();
  if (n_chunks_out) *n_chunks_out = nchunks;
}

}  // namespace cornerfem
