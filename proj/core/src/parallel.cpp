#include "turbcloud/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace turbcloud {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_chunks(std::size_t n, std::size_t chunk_size, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  threads = resolve_threads(threads);
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::size_t b = c * chunk_size;
      fn(b, std::min(b + chunk_size, n), c);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t b = c * chunk_size;
      fn(b, std::min(b + chunk_size, n), c);
    }
  };
  std::vector<std::thread> pool;
  const unsigned nw = static_cast<unsigned>(
      std::min<std::size_t>(threads, n_chunks));
  pool.reserve(nw - 1);
  for (unsigned t = 0; t + 1 < nw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  parallel_chunks(n, 1, threads,
                  [&](std::size_t b, std::size_t e, std::size_t) {
                    for (std::size_t i = b; i < e; ++i) fn(i);
                  });
}

} // namespace turbcloud
