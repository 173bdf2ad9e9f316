#pragma once

// Execution policy shared by every scan and simulation kernel.
//
// Each kernel is written once as a per-index body. `Exec::Serial` runs the
// body in a plain loop and is the reference path used by the tests; the
// OpenMP path must produce bit-identical per-index results. Reductions are
// never done inside the parallel region: bodies write into a per-index
// slot and the caller reduces serially in index order.

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

namespace wsq {

enum class Exec { Serial, OpenMP };

/// Worker count taken from WSQ_WORKERS (falls back to the OpenMP default).
inline int worker_count() {
  if (const char* env = std::getenv("WSQ_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

template <class Body>
void for_each_index(Exec exec, std::size_t n, Body&& body) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Exceptions cannot leave an OpenMP region; the one from the lowest index is rethrown,
  // which is the one the serial loop would have raised.
  const long long count = static_cast<long long>(n);
  std::exception_ptr error;
  long long error_index = count;
#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(wsq_for_each_error)
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Evaluates `body(i)` for every index and returns the results in index order.
template <class T, class Body>
std::vector<T> map_indices(Exec exec, std::size_t n, Body&& body) {
  std::vector<T> out(n);
  for_each_index(exec, n, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

}  // namespace wsq
