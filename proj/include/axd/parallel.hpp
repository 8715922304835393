#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace axd::detail {

/// Runs fn(begin, end) over contiguous slices of [0, n). With one worker the
/// call happens inline. If several slices throw, the exception from the
/// lowest slice is rethrown so failures are reported the same way for any
/// worker count.
template <class Fn>
void for_slices(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t slices = std::min<std::size_t>(workers, n);
  std::vector<std::exception_ptr> errors(slices);
  {
    std::vector<std::jthread> threads;
    threads.reserve(slices);
    for (std::size_t s = 0; s < slices; ++s) {
      const std::size_t begin = n * s / slices;
      const std::size_t end = n * (s + 1) / slices;
      threads.emplace_back([&, s, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace axd::detail
