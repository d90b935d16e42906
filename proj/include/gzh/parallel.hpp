#pragma once

// Reproducible parallel summation. The index range is cut into fixed-size
// blocks; each block is summed pairwise, and block sums are combined by a
// fixed pairwise tree. The partition never depends on the thread count, so
// the result is bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gzh {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

inline double pairwise(double* v, std::size_t n) {
  if (n == 0) return 0.0;
  // in-place tree: width doubles every pass
  for (std::size_t stride = 1; stride < n; stride *= 2)
    for (std::size_t i = 0; i + stride < n; i += 2 * stride) v[i] += v[i + stride];
  return v[0];
}

}  // namespace detail

inline constexpr std::int64_t kSumBlock = 4096;

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned threads = 0) {
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Σ_{i in [begin, end)} term(i).
template <class Term>
double deterministic_sum(std::int64_t begin, std::int64_t end, Term&& term, unsigned threads = 0) {
  if (end <= begin) return 0.0;
  const std::int64_t span = end - begin;
  const std::size_t blocks = static_cast<std::size_t>((span + kSumBlock - 1) / kSumBlock);
  std::vector<double> block_sums(blocks, 0.0);
  parallel_for(
      blocks,
      [&](std::size_t b) {
        const std::int64_t lo = begin + static_cast<std::int64_t>(b) * kSumBlock;
        const std::int64_t hi = std::min(end, lo + kSumBlock);
        std::vector<double> buf(static_cast<std::size_t>(hi - lo));
        for (std::int64_t i = lo; i < hi; ++i) buf[static_cast<std::size_t>(i - lo)] = term(i);
        block_sums[b] = detail::pairwise(buf.data(), buf.size());
      },
      threads);
  return detail::pairwise(block_sums.data(), block_sums.size());
}

}  // namespace gzh
