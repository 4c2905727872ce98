#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lwpr {

// Splits [0, count) into fixed blocks of `block` items and runs
// fn(begin, end, block_index) on up to `threads` workers. Block boundaries do
// not depend on the thread count, so per-block RNG streams give identical
// results for any worker count.
template <typename Fn>
void parallel_blocks(std::size_t count, std::size_t block, unsigned threads, Fn&& fn) {
  if (count == 0) return;
  block = std::max<std::size_t>(block, 1);
  const std::size_t blocks = (count + block - 1) / block;
  const auto workers = static_cast<std::size_t>(std::max(1u, threads));
  auto run_range = [&](std::size_t first_block, std::size_t stride) {
    for (std::size_t b = first_block; b < blocks; b += stride) {
      fn(b * block, std::min(count, (b + 1) * block), b);
    }
  };
  if (workers == 1 || blocks == 1) {
    run_range(0, 1);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, blocks); ++w) {
    pool.emplace_back([&, w] {
      try {
        run_range(w, workers);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lwpr
