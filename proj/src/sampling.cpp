#include "wsq/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace wsq::sampling {

using bellman::Direction;
using bellman::Params;
using bellman::Region;
using bellman::StatePoint;

namespace {

constexpr double kWMin = 1e-2;
constexpr double kWMax = 1e2;
constexpr double kD1Span = 1e3;   // y^{1/2} in [T1, T1 * span] for D1
constexpr double kD3Span = 1e-3;  // y^{1/2} in [4|x| * span, 4|x|] for D3

StatePoint with_weight(double x, double y, WeightCoords wv) { return {x, y, wv.w, wv.v}; }

WeightCoords weight_for(double t, double w) { return {w, std::sqrt(t / w)}; }

double t_lower(const Params& params) {
  return params.c > 1.0 + kTEpsilon ? 1.0 + kTEpsilon : params.c;
}

// Bounds of y^{1/2} for a region at fixed x and t.
std::pair<double, double> root_y_band(Region region, double ax, double t, const Params& params) {
  const StatePoint probe{ax, 0.0, t, 1.0};
  const double upper = bellman::d1_threshold(probe, params);
  switch (region) {
    case Region::D1: return {upper, upper * kD1Span};
    case Region::D2: return {4.0 * ax, upper};
    case Region::D3: return {4.0 * ax * kD3Span, 4.0 * ax};
  }
  return {0.0, 0.0};
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int nodes) {
  std::vector<double> out;
  if (nodes <= 1 || lo == hi) {
    out.push_back(lo);
    return out;
  }
  const double ratio = std::log(hi / lo);
  for (int k = 0; k < nodes; ++k) {
    out.push_back(k == nodes - 1 ? hi : lo * std::exp(ratio * k / (nodes - 1)));
  }
  return out;
}

WeightCoords sample_weight(const Params& params, CounterRng& rng) {
  const double lo = t_lower(params);
  const double t = lo < params.c ? rng.log_uniform(lo, params.c) : params.c;
  return weight_for(t, rng.log_uniform(kWMin, kWMax));
}

double sample_x(CounterRng& rng) { return rng.sign() * rng.log_uniform(kXMin, kXMax); }

StatePoint sample_in_region(Region region, const Params& params, CounterRng& rng) {
  const WeightCoords wv = sample_weight(params, rng);
  const double t = wv.w * wv.v * wv.v;
  if (region == Region::D1 && (rng() & 63u) == 0) {
    const double y = rng.log_uniform(1e-6, 1e6);
    return with_weight(0.0, y, wv);
  }
  const double x = sample_x(rng);
  const auto [lo, hi] = root_y_band(region, std::abs(x), t, params);
  double root_y = rng.log_uniform(lo, hi);
  // Keep D2 samples off the D3 edge, which belongs to D3.
  if (region == Region::D2) root_y = std::max(root_y, lo * (1.0 + 1e-12));
  return with_weight(x, root_y * root_y, wv);
}

Direction sample_direction(const StatePoint& pt, CounterRng& rng) {
  const double gd = rng.normal();
  const double gr = rng.normal();
  const double gs = rng.normal();
  const double norm = std::sqrt(gd * gd + gr * gr + gs * gs);
  const double scale_d = std::max(std::abs(pt.x), std::sqrt(pt.y));
  return {scale_d * gd / norm, pt.w * gr / norm, pt.v * gs / norm};
}

std::vector<Direction> axis_directions(const StatePoint& pt) {
  const double scale_d = std::max(std::abs(pt.x), std::sqrt(pt.y));
  return {{scale_d > 0.0 ? scale_d : 1.0, 0.0, 0.0}, {0.0, pt.w, 0.0}, {0.0, 0.0, pt.v}};
}

std::vector<RegionSample> structured_points(Region region, const Params& params, int nodes) {
  nodes = std::max(nodes, 2);
  std::vector<RegionSample> out;
  const auto xs = geometric_grid(kXMin, kXMax, nodes);
  std::vector<double> ts = geometric_grid(1.0, params.c, params.c > 1.0 ? nodes : 1);
  const auto ws = geometric_grid(kWMin, kWMax, nodes);
  for (double t : ts) {
    for (double w : ws) {
      const WeightCoords wv = weight_for(t, w);
      if (region == Region::D1) {
        for (double y : geometric_grid(1e-6, 1e6, nodes)) out.push_back({with_weight(0.0, y, wv), region, false});
      }
      for (double ax : xs) {
        const auto [lo, hi] = root_y_band(region, ax, t, params);
        const auto band = geometric_grid(lo, hi, nodes);
        for (std::size_t k = 0; k < band.size(); ++k) {
          const bool edge = k == 0 || k + 1 == band.size();
          for (double sign : {-1.0, 1.0}) {
            out.push_back({with_weight(sign * ax, band[k] * band[k], wv), region, edge});
          }
        }
      }
      if (region == Region::D3) {
        for (double ax : xs) {
          for (double sign : {-1.0, 1.0}) out.push_back({with_weight(sign * ax, 0.0, wv), region, false});
        }
      }
    }
  }
  return out;
}

}  // namespace wsq::sampling
