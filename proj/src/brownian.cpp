#include "wsq/brownian.hpp"

#include <cmath>

#include "wsq/errors.hpp"
#include "wsq/rng.hpp"

namespace wsq::circle {

namespace {

constexpr std::uint64_t kChunk = 256;

// Neumaier-compensated running sum.
struct Sum {
  double s = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = s + x;
    comp += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + comp; }
};

struct ChunkSums {
  Sum energy, energy2, tau, tau2;
  std::uint64_t truncated = 0;
};

}  // namespace

BrownianEstimate brownian_energy(const CircleFunction& f, const BrownianConfig& cfg) {
  if (!(cfg.dt > 0.0 && cfg.dt <= 1e-3)) throw DomainError("dt must lie in (0, 1e-3]");
  if (cfg.paths == 0) throw UsageError("need at least one path");
  const auto a = f.derivative_coefficients();
  const double dt = cfg.dt;
  const double sd = std::sqrt(dt);
  const auto max_steps = static_cast<std::uint64_t>(100.0 / dt);
  const std::uint64_t chunks = (cfg.paths + kChunk - 1) / kChunk;

  const auto sums = map_indices<ChunkSums>(cfg.exec, chunks, [&](std::size_t ci) {
    ChunkSums out;
    const std::uint64_t begin = ci * kChunk;
    const std::uint64_t end = std::min<std::uint64_t>(begin + kChunk, cfg.paths);
    for (std::uint64_t path = begin; path < end; ++path) {
      CounterRng rng(cfg.seed, path, 0);
      double x = 0.0, y = 0.0, r0 = 0.0;
      double energy = 0.0;
      double tau = 0.0;
      std::uint64_t step = 0;
      for (; step < max_steps; ++step) {
        const double h = grad_norm2(a, cplx{x, y});
        const double nx = x + sd * rng.normal();
        const double ny = y + sd * rng.normal();
        const double r1 = std::sqrt(nx * nx + ny * ny);
        bool killed = r1 >= 1.0;
        if (!killed && cfg.bridge) {
          // exp(-40) is below the smallest value uniform() returns, so the draw is skipped there.
          const double expo = 2.0 * (1.0 - r0) * (1.0 - r1) / dt;
          killed = expo < 40.0 && rng.uniform() < std::exp(-expo);
        }
        if (killed) {
          // Left-point rule; the bridge variant exits mid-step on average.
          const double frac = cfg.bridge ? 0.5 : 1.0;
          energy += frac * h * dt;
          tau += frac * dt;
          break;
        }
        energy += h * dt;
        tau += dt;
        x = nx;
        y = ny;
        r0 = r1;
      }
      if (step == max_steps) ++out.truncated;
      out.energy.add(energy);
      out.energy2.add(energy * energy);
      out.tau.add(tau);
      out.tau2.add(tau * tau);
    }
    return out;
  });

  Sum e, e2, t, t2;
  BrownianEstimate est;
  for (const auto& s : sums) {
    e.add(s.energy.value());
    e2.add(s.energy2.value());
    t.add(s.tau.value());
    t2.add(s.tau2.value());
    est.truncated += s.truncated;
  }
  const double n = static_cast<double>(cfg.paths);
  auto se = [n](double mean, double mean2) {
    return n > 1.0 ? std::sqrt(std::max(0.0, mean2 - mean * mean) / (n - 1.0)) : 0.0;
  };
  est.paths = cfg.paths;
  est.estimate = e.value() / n;
  est.std_error = se(est.estimate, e2.value() / n);
  est.mean_exit_time = t.value() / n;
  est.exit_time_se = se(est.mean_exit_time, t2.value() / n);
  return est;
}

BrownianComparison compare_with_gstar(const CircleFunction& f, const BrownianConfig& cfg,
                                      const QuadratureSpec& quad) {
  BrownianComparison out;
  out.mc = brownian_energy(f, cfg);
  const GstarSpectrum spec = gstar_spectrum(f, quad);
  out.average = 2.0 * spec.moments[0].real();
  out.quad_error = spec.error_estimate;
  out.difference = out.mc.estimate - out.average;
  return out;
}

}  // namespace wsq::circle
