#pragma once

/// \file parallel.hpp
/// \brief Deterministic parallel evaluation and reduction.
///
/// Quadrature sums must be bit-identical run to run and across worker
/// counts.  The scheme: node values are written into a slot vector indexed
/// by node (workers own disjoint contiguous ranges, so no synchronization
/// is needed), then reduced serially by fixed-order pairwise summation.
/// The reduction never depends on how the slots were filled.

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace pshlab {

/// Number of worker threads.  The PSH_LAB_THREADS environment variable,
/// when set to a positive integer, overrides hardware concurrency (either
/// direction, so determinism across worker counts can be exercised even on
/// a single-core host).  Always >= 1.
inline int worker_count() {
  if (const char* env = std::getenv("PSH_LAB_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) return requested;
  }
  const int n = static_cast<int>(std::thread::hardware_concurrency());
  return n < 1 ? 1 : n;
}

/// Fixed-order pairwise summation; consumes its argument.  Adjacent slots
/// are added level by level, which is deterministic and has O(log n)
/// rounding depth.
inline double pairwise_sum(std::vector<double> v) {
  std::size_t n = v.size();
  if (n == 0) return 0.0;
  while (n > 1) {
    std::size_t m = 0;
    for (std::size_t i = 0; i + 1 < n; i += 2) v[m++] = v[i] + v[i + 1];
    if (n % 2 == 1) v[m++] = v[n - 1];
    n = m;
  }
  return v[0];
}

/// Evaluate f(i) for i in [0, n) into slot i.  Values must not depend on
/// the execution order; exceptions from workers are rethrown (the one from
/// the lowest-numbered range wins, so failure is deterministic too).
template <typename F>
std::vector<double> parallel_fill(std::size_t n, F&& f) {
  std::vector<double> slots(n, 0.0);
  const int workers = worker_count();
  if (workers <= 1 || n < 128) {
    for (std::size_t i = 0; i < n; ++i) slots[i] = f(i);
    return slots;
  }
  const std::size_t k = static_cast<std::size_t>(workers);
  std::vector<std::exception_ptr> errors(k, nullptr);
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (std::size_t w = 0; w < k; ++w) {
    const std::size_t lo = n * w / k;
    const std::size_t hi = n * (w + 1) / k;
    pool.emplace_back([&, lo, hi, w]() {
      try {
        for (std::size_t i = lo; i < hi; ++i) slots[i] = f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return slots;
}

/// Deterministic parallel sum of f(i) over i in [0, n).
template <typename F>
double parallel_sum(std::size_t n, F&& f) {
  return pairwise_sum(parallel_fill(n, std::forward<F>(f)));
}

}  // namespace pshlab
