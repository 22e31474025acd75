#pragma once

// Thread helpers. Work is always split into fixed blocks whose results are
// combined in block order, so outputs are independent of the thread count.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qgs {

struct Exec {
  unsigned threads = 1;
  static Exec serial() { return {1}; }
};

unsigned default_threads();

// run fn(block_index) for block_index in [0, n_blocks); blocks are claimed
// from an atomic counter, each block is processed by exactly one thread
void parallel_blocks(size_t n_blocks, const Exec& exec,
                     const std::function<void(size_t)>& fn);

// convenience: map [begin, end) in chunks of chunk_size
void parallel_for_chunked(size_t begin, size_t end, size_t chunk_size,
                          const Exec& exec,
                          const std::function<void(size_t, size_t)>& fn);

}  // namespace qgs
