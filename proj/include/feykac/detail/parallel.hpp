#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace feykac::detail {

// Splits [0, n) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. The split never influences results as long as
// body writes each index independently.
template <class Body>
void parallel_for_chunks(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t count = std::min<std::size_t>(workers, n);
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> threads;
    threads.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
      const std::size_t begin = n * w / count;
      const std::size_t end = n * (w + 1) / count;
      threads.emplace_back([&, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace feykac::detail
