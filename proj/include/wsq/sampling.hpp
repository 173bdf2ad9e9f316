#pragma once

// Sample generators for the Bellman scans. The measures are scale-aware:
// |x| is log-uniform over six decades, y^{1/2} is log-uniform inside the
// band that defines the target region, and t = w v^2 is drawn in [1 + eps, c].

#include <cstdint>
#include <vector>

#include "wsq/bellman.hpp"
#include "wsq/rng.hpp"

namespace wsq::sampling {

inline constexpr double kXMin = 1e-3;
inline constexpr double kXMax = 1e3;
inline constexpr double kTEpsilon = 1e-6;

struct WeightCoords {
  double w;
  double v;
};

/// (w, v) with t = w v^2 log-uniform in [1 + kTEpsilon, c] (t = c when c is too
/// close to 1 for that interval) and w log-uniform over four decades.
WeightCoords sample_weight(const bellman::Params& params, CounterRng& rng);

/// Symmetric log-uniform x with magnitude in [kXMin, kXMax].
double sample_x(CounterRng& rng);

/// Random point whose region is `region` (x = 0 points appear in D1 with probability 1/64).
bellman::StatePoint sample_in_region(bellman::Region region, const bellman::Params& params,
                                     CounterRng& rng);

/// Direction with components scaled to the point: d ~ max(|x|, y^{1/2}), r ~ w, s ~ v,
/// normalised to unit length in those scaled coordinates.
bellman::Direction sample_direction(const bellman::StatePoint& pt, CounterRng& rng);

/// The three scaled coordinate axes.
std::vector<bellman::Direction> axis_directions(const bellman::StatePoint& pt);

struct RegionSample {
  bellman::StatePoint point;
  bellman::Region branch;
  bool on_boundary = false;
};

/// Structured grid on the closure of a region: extreme and middle values of
/// |x|, t, w and of the position of y^{1/2} inside the region's band, with the
/// band edges included. `nodes` >= 2 nodes per coordinate.
std::vector<RegionSample> structured_points(bellman::Region region, const bellman::Params& params,
                                            int nodes);

/// Geometric grid of `nodes` values between lo and hi (inclusive).
std::vector<double> geometric_grid(double lo, double hi, int nodes);

}  // namespace wsq::sampling
