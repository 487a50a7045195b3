#pragma once

// Data-parallel loops used by the verification code. Every kernel has a
// serial reference; both visit the same per-index work, so results agree
// exactly (max-reductions do not depend on order).

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>

namespace fibra {

enum class Execution { kSerial, kParallel };

// max over i in [0, n) of f(i); 0 for n == 0.
template <class F>
double max_over_serial(std::size_t n, F&& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, f(i));
  return worst;
}

template <class F>
double max_over_parallel(std::size_t n, F&& f) {
  double worst = 0.0;
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      worst = std::max(worst, f(static_cast<std::size_t>(i)));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return worst;
}

template <class F>
double max_over(Execution exec, std::size_t n, F&& f) {
  return exec == Execution::kParallel ? max_over_parallel(n, std::forward<F>(f))
                                      : max_over_serial(n, std::forward<F>(f));
}

// Runs f(i) for every i; f must only write to storage owned by index i.
template <class F>
void for_each_index(Execution exec, std::size_t n, F&& f) {
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace fibra
