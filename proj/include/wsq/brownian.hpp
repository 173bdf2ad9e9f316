#pragma once

// Monte Carlo for E_0 int_0^tau |grad u_f(B_s)|^2 ds, with B a planar
// Brownian motion started at 0 and tau its exit time from the unit disc.
// Paths are grouped in fixed chunks; each path draws from its own counter
// stream, so the estimate is independent of the worker count.

#include <cmath>
#include <cstdint>

#include "wsq/circle.hpp"
#include "wsq/circle_operators.hpp"
#include "wsq/parallel.hpp"

namespace wsq::circle {

struct BrownianConfig {
  std::uint64_t paths = 100000;
  double dt = 1e-4;
  std::uint64_t seed = 42;
  /// Kill inside a step with the Brownian-bridge crossing probability
  /// exp(-2 (1 - |B_k|)(1 - |B_{k+1}|) / dt). Off: plain Euler absorption at |B| >= 1.
  bool bridge = true;
  Exec exec = Exec::OpenMP;
};

struct BrownianEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double mean_exit_time = 0.0;
  double exit_time_se = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t truncated = 0;  ///< paths stopped at the step cap (100 / dt steps)
};

/// Throws DomainError unless 0 < dt <= 1e-3, UsageError when paths = 0.
BrownianEstimate brownian_energy(const CircleFunction& f, const BrownianConfig& cfg);

struct BrownianComparison {
  BrownianEstimate mc;
  double average = 0.0;         ///< theta-average of g*^2 by quadrature
  double quad_error = 0.0;
  double difference = 0.0;      ///< mc.estimate - average
  bool passed() const { return std::abs(difference) <= 3.0 * mc.std_error + quad_error; }
};

BrownianComparison compare_with_gstar(const CircleFunction& f, const BrownianConfig& cfg,
                                      const QuadratureSpec& quad = {});

}  // namespace wsq::circle
