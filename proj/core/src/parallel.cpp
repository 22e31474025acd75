#include "qgs/parallel.hpp"

#include "qgs/numeric.hpp"

namespace qgs {

unsigned default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void parallel_blocks(size_t n_blocks, const Exec& exec,
                     const std::function<void(size_t)>& fn) {
  unsigned workers = exec.threads == 0 ? 1 : exec.threads;
  if (workers == 1 || n_blocks <= 1) {
    for (size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    while (true) {
      size_t b = next.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        fn(b);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

void parallel_for_chunked(size_t begin, size_t end, size_t chunk_size,
                          const Exec& exec,
                          const std::function<void(size_t, size_t)>& fn) {
  if (end <= begin) return;
  size_t n_blocks = (end - begin + chunk_size - 1) / chunk_size;
  parallel_blocks(n_blocks, exec, [&](size_t b) {
    size_t lo = begin + b * chunk_size;
    size_t hi = std::min(end, lo + chunk_size);
    fn(lo, hi);
  });
}

ComplexVal combine_blocks(const std::vector<ComplexVal>& blocks) {
  SumAccumulator acc;
  double err_in = 0.0;
  for (const auto& b : blocks) {
    acc.add(b.v, 0.0);
    err_in += b.err;
  }
  ComplexVal out = acc.result();
  out.err += err_in;
  return out;
}

}  // namespace qgs
