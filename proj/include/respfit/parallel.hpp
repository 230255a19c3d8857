#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace respfit {

// Runs body(i) for i in [0, n). Work is split into contiguous chunks over
// `threads` workers; with threads <= 1 it degenerates to a plain loop.
// body must not touch shared mutable state except slots indexed by i.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

// Pairwise tree reduction. Summation order depends only on the number of
// terms, so reductions over per-index results are reproducible for any
// worker count.
template <typename T, typename Add>
T pairwise_reduce(std::vector<T> terms, const T& zero, Add add) {
  if (terms.empty()) return zero;
  while (terms.size() > 1) {
    std::size_t half = (terms.size() + 1) / 2;
    for (std::size_t i = 0; i + half < terms.size(); ++i)
      terms[i] = add(terms[i], terms[i + half]);
    terms.resize(half);
  }
  return terms[0];
}

}  // namespace respfit
