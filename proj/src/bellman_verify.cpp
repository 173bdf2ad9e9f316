#include "wsq/bellman_verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iterator>
#include <string>

#include "wsq/errors.hpp"
#include "wsq/rng.hpp"
#include "wsq/sampling.hpp"

namespace wsq::verify {

using bellman::Direction;
using bellman::Params;
using bellman::QuadForm;
using bellman::Region;
using bellman::StatePoint;

namespace {

constexpr std::array<Region, 3> kRegions = {Region::D1, Region::D2, Region::D3};

std::uint64_t stream_id(std::string_view check, double c, int region) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : check) h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
  return splitmix64(h ^ std::bit_cast<std::uint64_t>(c)) + static_cast<std::uint64_t>(region);
}

ViolationRecord record(std::string name, const Params& params, double margin, double scale,
                       std::uint64_t index) {
  ViolationRecord rec;
  rec.check_name = std::move(name);
  rec.margin = margin;
  rec.scale = scale;
  rec.sample_index = index;
  rec.extra.emplace_back("c", params.c);
  return rec;
}

ViolationRecord point_record(std::string name, const Params& params, const StatePoint& pt,
                             double margin, double scale, std::uint64_t index) {
  ViolationRecord rec = record(std::move(name), params, margin, scale, index);
  rec.point = pt;
  return rec;
}

// Runs body(i, part) over n indices under cfg.exec and merges in index order.
template <class Body>
ScanReport run_indexed(const std::string& name, Exec exec, double tol, std::size_t n, Body&& body) {
  auto parts = map_indices<ScanReport>(exec, n, [&](std::size_t i) {
    ScanReport part;
    part.tolerance = tol;
    body(i, part);
    return part;
  });
  ScanReport out;
  out.check_name = name;
  out.tolerance = tol;
  for (const auto& part : parts) out.merge(part);
  return out;
}

void stamp(ScanReport& report, const Params& params, const ScanConfig& cfg,
           std::chrono::steady_clock::time_point start) {
  report.seed = cfg.seed;
  report.parameters.emplace_back("c", params.c);
  report.parameters.emplace_back("n_random", static_cast<double>(cfg.n_random));
  report.parameters.emplace_back("grid_nodes", cfg.grid_nodes);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Structured closure points followed by random samples, for one region.
struct RegionPoints {
  std::vector<sampling::RegionSample> structured;
  std::uint64_t random = 0;
  std::size_t size() const { return structured.size() + random; }
};

sampling::RegionSample region_point(const RegionPoints& set, Region region, const Params& params,
                                    CounterRng& rng, std::size_t i) {
  if (i < set.structured.size()) return set.structured[i];
  return {sampling::sample_in_region(region, params, rng), region, false};
}

double y32w(const StatePoint& pt) { return pt.y * std::sqrt(pt.y) * pt.w; }

// G and its second derivatives, written from the displayed closed forms.
struct GHessian {
  double g, gww, gwv, gvv;
};

GHessian g_hessian(double w, double v, const Params& params) {
  const double rc = std::sqrt(params.c);
  const double g = 6.0 * v - 4.0 / std::sqrt(w) - v * std::log(w * v * v) / rc;
  return {g, std::pow(w, -2.5) * (-3.0 * rc + std::sqrt(w) * v) / rc, -1.0 / (rc * w), -2.0 / (rc * v)};
}

}  // namespace

std::vector<double> linear_grid(double lo, double hi, int nodes) {
  std::vector<double> out;
  if (nodes <= 1) return {lo};
  for (int k = 0; k < nodes; ++k) out.push_back(k == nodes - 1 ? hi : lo + (hi - lo) * k / (nodes - 1));
  return out;
}

ScanReport check_initial(const Params& params, const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto structured_x = sampling::geometric_grid(sampling::kXMin, sampling::kXMax, cfg.grid_nodes);
  const auto ts = sampling::geometric_grid(1.0, params.c, params.c > 1.0 ? cfg.grid_nodes : 1);
  const auto ws = sampling::geometric_grid(1e-2, 1e2, cfg.grid_nodes);
  std::vector<StatePoint> grid;
  for (double t : ts) {
    for (double w : ws) {
      const double v = std::sqrt(t / w);
      grid.push_back({0.0, 0.0, w, v});
      for (double ax : structured_x)
        for (double sign : {-1.0, 1.0}) grid.push_back({sign * ax, ax * ax, w, v});
    }
  }
  const std::uint64_t stream = stream_id("initial", params.c, 0);
  ScanReport report = run_indexed("initial", cfg.exec, cfg.tolerance, grid.size() + cfg.n_random,
                                  [&](std::size_t i, ScanReport& part) {
    StatePoint pt;
    if (i < grid.size()) {
      pt = grid[i];
    } else {
      CounterRng rng(cfg.seed, stream, i - grid.size());
      const auto wv = sampling::sample_weight(params, rng);
      const double x = sampling::sample_x(rng);
      pt = {x, x * x, wv.w, wv.v};
    }
    const double ax = std::abs(pt.x);
    part.add(point_record("initial", params, pt, bellman::eval_B(pt, params),
                          1.0 + ax * ax * ax * pt.w, i));
  });
  // Scalar bound behind the initial condition.
  const double rc = std::sqrt(params.c);
  for (const double t : linear_grid(1.0, params.c, 1001)) {
    const double lhs = 13.0 * std::pow(params.c / t, params.beta);
    const double rhs = 240.0 * 64.0 * rc * params.c / t;
    ViolationRecord rec = record("initial.scalar_bound", params, lhs - rhs, 1.0 + lhs + rhs,
                                 report.samples);
    rec.extra.emplace_back("t", t);
    report.add(rec);
  }
  stamp(report, params, cfg, start);
  return report;
}

ScanReport check_majorization(const Params& params, const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const double k64 = 64.0 * std::sqrt(params.c);
  const double kappa = 1.0 / 3.0;
  ScanReport report;
  report.check_name = "majorization";
  report.tolerance = cfg.tolerance;
  for (Region region : kRegions) {
    RegionPoints set{sampling::structured_points(region, params, cfg.grid_nodes), cfg.n_random};
    const std::uint64_t stream = stream_id("majorization", params.c, static_cast<int>(region));
    report.merge(run_indexed("majorization", cfg.exec, cfg.tolerance, set.size(),
                             [&](std::size_t i, ScanReport& part) {
      CounterRng rng(cfg.seed, stream, i);
      const auto sample = region_point(set, region, params, rng, i);
      const StatePoint& pt = sample.point;
      const double value = bellman::eval_branch(sample.branch, pt, params);
      const double ax = std::abs(pt.x);
      const double lower_pos = kappa * y32w(pt);
      const double lower_neg = kappa * k64 * k64 * k64 * ax * ax * ax * pt.w;
      part.add(point_record(std::string("majorization.") + std::string(bellman::region_name(region)),
                            params, pt, lower_pos - lower_neg - value,
                            1.0 + std::abs(value) + lower_pos + lower_neg, i));
    }));
  }
  stamp(report, params, cfg, start);
  return report;
}

ScanReport check_gluing(const Params& params, const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "gluing";
  report.tolerance = cfg.tolerance;
  for (Region region : kRegions) {
    RegionPoints set{sampling::structured_points(region, params, cfg.grid_nodes), cfg.n_random};
    const std::uint64_t stream = stream_id("gluing", params.c, static_cast<int>(region));
    report.merge(run_indexed("gluing", cfg.exec, cfg.tolerance, set.size(),
                             [&](std::size_t i, ScanReport& part) {
      CounterRng rng(cfg.seed, stream, i);
      const StatePoint pt = region_point(set, region, params, rng, i).point;
      const double b1 = bellman::eval_branch(Region::D1, pt, params);
      const double b2 = bellman::eval_branch(Region::D2, pt, params);
      const double b3 = bellman::eval_branch(Region::D3, pt, params);
      auto order = [&](const char* name, double lo, double hi) {
        part.add(point_record(name, params, pt, lo - hi, 1.0 + std::abs(lo) + std::abs(hi), i));
      };
      switch (region) {
        case Region::D1: order("gluing.B1<=B2 on D1", b1, b2); break;
        case Region::D2:
          order("gluing.B2<=B1 on D2", b2, b1);
          order("gluing.B2<=B3 on D2", b2, b3);
          break;
        case Region::D3: order("gluing.B3<=B2 on D3", b3, b2); break;
      }
    }));
  }
  // Shared boundary y^{1/2} = 4|x|: B2 and B3 coincide.
  const auto xs = sampling::geometric_grid(sampling::kXMin, sampling::kXMax, cfg.grid_nodes);
  const std::uint64_t stream = stream_id("gluing.boundary", params.c, 0);
  const std::size_t n_boundary = xs.size() * 2 + cfg.n_random / 10;
  report.merge(run_indexed("gluing", cfg.exec, cfg.tolerance, n_boundary,
                           [&](std::size_t i, ScanReport& part) {
    CounterRng rng(cfg.seed, stream, i);
    const auto wv = sampling::sample_weight(params, rng);
    const double x = i < xs.size() * 2 ? (i % 2 ? -1.0 : 1.0) * xs[i / 2] : sampling::sample_x(rng);
    const StatePoint pt{x, 16.0 * x * x, wv.w, wv.v};
    const double b2 = bellman::eval_branch(Region::D2, pt, params);
    const double b3 = bellman::eval_branch(Region::D3, pt, params);
    part.add(point_record("gluing.B2=B3 on boundary", params, pt, std::abs(b2 - b3),
                          1.0 + std::abs(b2), i));
  }));
  stamp(report, params, cfg, start);
  return report;
}

ScanReport check_concavity(const Params& params, const ScanConfig& cfg, int dirs_per_point) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "concavity";
  report.tolerance = cfg.tolerance;
  for (Region region : kRegions) {
    RegionPoints set{sampling::structured_points(region, params, cfg.grid_nodes), cfg.n_random};
    const std::uint64_t stream = stream_id("concavity", params.c, static_cast<int>(region));
    const std::string name = std::string("concavity.") + std::string(bellman::region_name(region));
    report.merge(run_indexed(name, cfg.exec, cfg.tolerance, set.size(),
                             [&](std::size_t i, ScanReport& part) {
      CounterRng rng(cfg.seed, stream, i);
      const auto sample = region_point(set, region, params, rng, i);
      const StatePoint& pt = sample.point;
      auto dirs = sampling::axis_directions(pt);
      for (int k = 0; k < dirs_per_point; ++k) dirs.push_back(sampling::sample_direction(pt, rng));
      for (const Direction& dir : dirs) {
        const QuadForm q = bellman::second_variation(sample.branch, pt, params, dir);
        ViolationRecord rec = point_record(name, params, pt, q.value, 1.0 + q.scale, i);
        rec.direction = dir;
        part.add(rec);
      }
    }));
  }
  report.parameters.emplace_back("dirs_per_point", dirs_per_point);
  stamp(report, params, cfg, start);
  return report;
}

ScanReport check_hessian_oracle(const Params& params, const ScanConfig& cfg, double rel_tol) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "hessian_oracle";
  report.tolerance = rel_tol;
  for (Region region : kRegions) {
    const std::uint64_t stream = stream_id("hessian_oracle", params.c, static_cast<int>(region));
    const std::string name = std::string("hessian_oracle.") + std::string(bellman::region_name(region));
    report.merge(run_indexed(name, cfg.exec, rel_tol, cfg.n_random, [&](std::size_t i, ScanReport& part) {
      CounterRng rng(cfg.seed, stream, i);
      StatePoint pt = sampling::sample_in_region(region, params, rng);
      while (pt.x == 0.0) pt = sampling::sample_in_region(region, params, rng);
      const double gd = rng.normal();
      const double gr = rng.normal();
      const double gs = rng.normal();
      const Direction dir{std::abs(pt.x) * gd, pt.w * gr, pt.v * gs};
      const double g = std::max({std::abs(gd), std::abs(gr), std::abs(gs)});
      const QuadForm closed = bellman::second_variation(region, pt, params, dir);
      // Step ladder: when the branch has large cancelling terms, small steps are
      // roundoff-bound, so keep the step where consecutive estimates agree best.
      constexpr double kSteps[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
      double ladder[std::size(kSteps)];
      for (std::size_t k = 0; k < std::size(kSteps); ++k) {
        ladder[k] = bellman::xi_second_fd(pt, params, dir, kSteps[k] / g, region, false);
      }
      std::size_t best = 1;
      for (std::size_t k = 2; k < std::size(kSteps); ++k) {
        if (std::abs(ladder[k] - ladder[k - 1]) < std::abs(ladder[best] - ladder[best - 1])) best = k;
      }
      const double fd = ladder[best];
      const double h = kSteps[best] / g;
      ViolationRecord rec = point_record(name, params, pt, std::abs(closed.value - fd), closed.scale, i);
      rec.direction = dir;
      rec.extra.emplace_back("fd", fd);
      rec.extra.emplace_back("closed", closed.value);
      rec.extra.emplace_back("h", h);
      part.add(rec);
    }));
  }
  stamp(report, params, cfg, start);
  return report;
}

double f_hessian_reduction(double t, double c) {
  return 3.0 * (t - 0.5) * (c - 0.5 * t) - (1.0 - 1.0 / (4.0 * c)) * t;
}

SymMatrix2 f_hessian_excess(double w, double v, const Params& params) {
  const double t = w * v * v;
  const double base = t - params.a;
  const double al = params.alpha;
  const double phi = std::pow(base, al);
  const double phi1 = al * std::pow(base, al - 1.0);
  const double phi2 = al * (al - 1.0) * std::pow(base, al - 2.0);
  return {v * v * phi2 / 2.0, 2.0 * w * v * phi2,
          4.0 * w * w * phi2 + 6.0 * (phi - t * phi1) / (v * v * v * v)};
}

ScanReport check_F_hessian(const Params& params, std::span<const double> t_grid, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "F_hessian";
  report.tolerance = tolerance;
  const auto ws = sampling::geometric_grid(1e-2, 1e2, 5);
  for (const double t : t_grid) {
    if (t < 1.0 || t > params.c * (1.0 + bellman::kDomainSlack)) {
      throw DomainError("t-grid must lie in [1, c]");
    }
    const double lhs = 3.0 * (t - 0.5) * (params.c - 0.5 * t);
    const double rhs = (1.0 - 1.0 / (4.0 * params.c)) * t;
    ViolationRecord rec = record("F_hessian.reduction", params, rhs - lhs, 1.0 + lhs + rhs, report.samples);
    rec.extra.emplace_back("t", t);
    report.add(rec);
    for (const double w : ws) {
      const double v = std::sqrt(t / w);
      const SymMatrix2 m = f_hessian_excess(w, v, params);
      ViolationRecord mrec = point_record("F_hessian.matrix", params, {0.0, 0.0, w, v},
                                          m.eigenvalues()[1], 1.0 + m.norm(), report.samples);
      report.add(mrec);
    }
  }
  report.parameters.emplace_back("c", params.c);
  report.parameters.emplace_back("t_nodes", static_cast<double>(t_grid.size()));
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SymMatrix3 reduced_b2_matrix(double ratio, double gamma) {
  return {ratio - 28.0, -gamma + 0.5, 27.0, -3.0 / 16.0, -3.0 / 8.0, -30.0 + 15.0 / 4.0};
}

LemmaB2Matrices build_lemma_b2_matrices(const StatePoint& pt, const Params& params, double gamma) {
  const double ax = std::abs(pt.x);
  const double root_y = std::sqrt(pt.y);
  const double t = pt.t();
  const double upper = 16.0 * std::pow(params.c / t, 1.0 - params.beta) * std::sqrt(params.c) * ax;
  const double slack = 1e-12 * (1.0 + root_y);
  if (root_y < 4.0 * ax - slack || root_y > upper + slack || pt.y <= 0.0) {
    throw DomainError("b2 lemma needs 4|x| <= y^{1/2} <= 16 (c/t)^{1-beta} c^{1/2} |x|, y > 0");
  }
  if (std::abs(gamma) > 1.0 / 24.0 * (1.0 + 1e-15)) throw DomainError("b2 lemma needs |gamma| <= 1/24");
  const double b = params.beta;
  const double x = pt.x;
  const double w = pt.w;
  const double v = pt.v;
  const SymMatrix3 a1{2.0 * w + x * x / pt.y * w,     2.0 * (1.0 - b) * x,
                      -4.0 * b * x * w / v,           b * (b - 1.0) * x * x / w,
                      2.0 * b * (b - 1.0) * x * x / v, 2.0 * b * (2.0 * b + 1.0) * x * x * w / (v * v)};
  const double k2 = 80.0 * std::pow(params.c, 1.5) * ax;
  const SymMatrix3 a2 =
      SymMatrix3{6.0 / (v * v), 0.0, -6.0 * x / (v * v * v), 0.0, 0.0, 6.0 * x * x / (v * v * v * v)} * k2;
  const SymMatrix3 a3{30.0 * w, 0.0, -30.0 * x * w / v, 0.0, 0.0, 30.0 * x * x * w / (v * v)};
  return {a1, a2, a3, reduced_b2_matrix(x * x / pt.y, gamma)};
}

ScanReport check_reduced_matrix_grid(double step, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "b2_reduced_matrix";
  report.tolerance = tolerance;
  const int n_ratio = static_cast<int>(std::floor(1.0 / 16.0 / step + 1e-9));
  const int n_gamma = static_cast<int>(std::floor(2.0 / 24.0 / step + 1e-9));
  for (int i = 0; i <= n_ratio + 1; ++i) {
    const double ratio = std::min(i * step, 1.0 / 16.0);
    for (int j = 0; j <= n_gamma + 1; ++j) {
      const double gamma = std::min(-1.0 / 24.0 + j * step, 1.0 / 24.0);
      const SymMatrix3 m = reduced_b2_matrix(ratio, gamma);
      const auto ev = m.eigenvalues();
      const auto ev_jacobi = m.eigenvalues_jacobi();
      ViolationRecord rec;
      rec.check_name = "b2_reduced_matrix.npd";
      rec.margin = std::max(ev[2], ev_jacobi[2]);
      rec.scale = 1.0 + m.frobenius_norm();
      rec.sample_index = report.samples;
      rec.extra = {{"ratio", ratio}, {"gamma", gamma}, {"eig_closed", ev[2]}, {"eig_jacobi", ev_jacobi[2]}};
      report.add(rec);
    }
  }
  report.parameters.emplace_back("step", step);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ScanReport check_lemma_b2(const Params& params, const ScanConfig& cfg, std::span<const double> gamma_grid) {
  const auto start = std::chrono::steady_clock::now();
  RegionPoints set{sampling::structured_points(Region::D2, params, cfg.grid_nodes), cfg.n_random};
  const std::uint64_t stream = stream_id("lemma_b2", params.c, 2);
  const std::vector<double> gammas(gamma_grid.begin(), gamma_grid.end());
  ScanReport report = run_indexed("lemma_b2", cfg.exec, cfg.tolerance, set.size(), [&](std::size_t i, ScanReport& part) {
    CounterRng rng(cfg.seed, stream, i);
    const StatePoint pt = region_point(set, Region::D2, params, rng, i).point;
    const double t = pt.t();
    const double weight = std::pow(params.c / t, params.beta) * std::sqrt(pt.y);
    const Direction dir = sampling::sample_direction(pt, rng);
    const QuadForm q = bellman::block_second_variation(2, pt, params, dir);
    for (const double gamma : gammas) {
      const double bound = gamma * weight * pt.x * dir.d * dir.r;
      ViolationRecord rec = point_record("lemma_b2.bound", params, pt, q.value - bound,
                                         1.0 + q.scale + std::abs(bound), i);
      rec.direction = dir;
      rec.extra.emplace_back("gamma", gamma);
      part.add(rec);
    }
    // Matrix route at the same point.
    const auto mats = build_lemma_b2_matrices(pt, params, gammas.empty() ? 0.0 : gammas.front());
    // Rank-one difference: the closed-form eigenvalues lose half the digits near the double root.
    const SymMatrix3 dominated = mats.a2 - mats.a3 * weight;
    part.add(point_record("lemma_b2.A2>=weight*A3", params, pt, -dominated.eigenvalues_jacobi()[0],
                          1.0 + mats.a2.frobenius_norm() + weight * mats.a3.frobenius_norm(), i));
    for (const double gamma : gammas) {
      const SymMatrix3 gamma_m{0.0, -gamma * pt.x, 0.0, 0.0, 0.0, 0.0};
      const SymMatrix3 m = mats.a1 - mats.a3 + gamma_m;
      ViolationRecord rec = point_record("lemma_b2.A1-A3+Gamma npd", params, pt, m.eigenvalues_jacobi()[2],
                                         1.0 + m.frobenius_norm(), i);
      rec.extra.emplace_back("gamma", gamma);
      part.add(rec);
    }
  });
  report.parameters.emplace_back("gamma_nodes", static_cast<double>(gammas.size()));
  stamp(report, params, cfg, start);
  return report;
}

SymMatrix2 lemma_b4_matrix(double w, double v, const Params& params) {
  const GHessian g = g_hessian(w, v, params);
  return {g.gww, g.gwv, g.gvv + 1.5 / (std::sqrt(params.c) * v)};
}

ScanReport check_lemma_b4(const Params& params, const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.check_name = "lemma_b4";
  report.tolerance = cfg.tolerance;
  const double c = params.c;
  for (Region region : kRegions) {
    RegionPoints set{sampling::structured_points(region, params, cfg.grid_nodes), cfg.n_random / 3 + 1};
    const std::uint64_t stream = stream_id("lemma_b4", c, static_cast<int>(region));
    report.merge(run_indexed("lemma_b4", cfg.exec, cfg.tolerance, set.size(), [&](std::size_t i, ScanReport& part) {
      CounterRng rng(cfg.seed, stream, i);
      const StatePoint pt = region_point(set, region, params, rng, i).point;
      const Direction dir = sampling::sample_direction(pt, rng);
      const double ax = std::abs(pt.x);
      const double v = pt.v;
      const double v2 = v * v;
      const QuadForm q4 = bellman::block_second_variation(4, pt, params, dir);
      const double low4 = c * ax * ax * ax * dir.s * dir.s / (72.0 * v2 * v2);
      ViolationRecord r4 = point_record("lemma_b4.b4_lower", params, pt, low4 - q4.value,
                                        1.0 + q4.scale + low4, i);
      r4.direction = dir;
      part.add(r4);

      bellman::BlockCombination combo;
      combo.blocks[2] = 1.0;
      combo.blocks[3] = 1152.0;
      const QuadForm q34 = bellman::combination_second_variation(combo, pt, params, dir);
      const double low34 = 2.0 / 3.0 * c * ax * dir.d * dir.d / v2 + 15.0 * c * ax * ax * ax * dir.s * dir.s / (v2 * v2);
      ViolationRecord r34 = point_record("lemma_b4.b3+1152b4_lower", params, pt, low34 - q34.value,
                                         1.0 + q34.scale + low34, i);
      r34.direction = dir;
      part.add(r34);

      const GHessian g = g_hessian(pt.w, v, params);
      part.add(point_record("lemma_b4.G<=6v", params, pt, g.g - 6.0 * v, 1.0 + std::abs(g.g) + 6.0 * v, i));
      const SymMatrix2 a = lemma_b4_matrix(pt.w, v, params);
      part.add(point_record("lemma_b4.A npd", params, pt, a.eigenvalues()[1], 1.0 + a.norm(), i));
      const double lhs = 3.0 * std::sqrt(pt.w) * v;
      part.add(point_record("lemma_b4.scalar", params, pt, lhs - 3.0 * std::sqrt(c), 1.0 + lhs + 3.0 * std::sqrt(c), i));
      // Closed form of xi''_{b3} as displayed.
      const QuadForm q3 = bellman::block_second_variation(3, pt, params, dir);
      const double display = 64.0 * std::pow(c, 1.5) *
                             (6.0 * ax * dir.d * dir.d / v2 - 12.0 * pt.x * ax * dir.d * dir.s / (v2 * v) +
                              6.0 * ax * ax * ax * dir.s * dir.s / (v2 * v2));
      part.add(point_record("lemma_b4.b3_display", params, pt, std::abs(display - q3.value), 1.0 + q3.scale, i));
    }));
  }
  stamp(report, params, cfg, start);
  return report;
}

std::vector<ScanReport> run_all_checks(const Params& params, const ScanConfig& cfg, int dirs_per_point) {
  std::vector<ScanReport> out;
  out.push_back(check_initial(params, cfg));
  out.push_back(check_majorization(params, cfg));
  out.push_back(check_gluing(params, cfg));
  out.push_back(check_concavity(params, cfg, dirs_per_point));
  ScanConfig oracle_cfg = cfg;
  oracle_cfg.n_random = std::max<std::uint64_t>(1, cfg.n_random / 10);
  out.push_back(check_hessian_oracle(params, oracle_cfg));
  const auto t_grid = linear_grid(1.0, params.c, 1001);
  out.push_back(check_F_hessian(params, t_grid, cfg.tolerance));
  const auto gammas = linear_grid(-1.0 / 24.0, 1.0 / 24.0, 9);
  out.push_back(check_lemma_b2(params, cfg, gammas));
  out.push_back(check_lemma_b4(params, cfg));
  return out;
}

}  // namespace wsq::verify
