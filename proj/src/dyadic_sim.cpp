#include "wsq/dyadic_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "wsq/bellman.hpp"
#include "wsq/dyadic.hpp"
#include "wsq/errors.hpp"
#include "wsq/extrapolation.hpp"

namespace wsq::dyadic {

namespace {

constexpr double kRoundoff = 1e-12;

enum Stream : std::uint64_t {
  kRubioStream = 0x52424446,
  kComposeStream = 0x434f4d50,
  kMaximalStream = 0x4d415831,
  kMainStream = 0x4d41494e,
  kDriftStream = 0x44524654,
};

std::uint64_t p_tag(double p) { return static_cast<std::uint64_t>(std::llround(p * 1000.0)); }

ViolationRecord trial_record(std::string name, double margin, double scale, std::uint64_t index,
                             std::vector<std::pair<std::string, double>> extra) {
  ViolationRecord rec;
  rec.check_name = std::move(name);
  rec.margin = margin;
  rec.scale = scale;
  rec.sample_index = index;
  rec.extra = std::move(extra);
  return rec;
}

template <class Body>
ScanReport run_trials(const std::string& name, Exec exec, std::uint64_t n, double tol, Body&& body) {
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

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> random_nonnegative(int depth, CounterRng& rng) {
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> f(n, 0.0);
  switch (rng() % 3) {
    case 0: f[rng() % n] = 1.0; break;
    case 1:
      for (double& x : f) x = std::exp(rng.normal());
      break;
    default:
      for (double& x : f) x = rng.uniform() < 0.1 ? rng.log_uniform(1e-2, 1e2) : 0.0;
      f[rng() % n] += 1.0;
      break;
  }
  return f;
}

}  // namespace

std::string_view family_name(WeightFamily family) {
  switch (family) {
    case WeightFamily::Unit: return "unit";
    case WeightFamily::LogNormal: return "lognormal";
    case WeightFamily::Spike: return "spike";
    case WeightFamily::PowerLike: return "power";
  }
  return "?";
}

std::vector<double> generate_weight(WeightFamily family, int depth, CounterRng& rng) {
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> w(n, 1.0);
  switch (family) {
    case WeightFamily::Unit: break;
    case WeightFamily::LogNormal: {
      const double sigma = rng.uniform(0.0, 2.0);
      for (double& x : w) x = std::exp(sigma * rng.normal());
      break;
    }
    case WeightFamily::Spike: w[rng() % n] = rng.log_uniform(1.0, 1e3); break;
    case WeightFamily::PowerLike: {
      const std::size_t centre = rng() % n;
      const double gamma = rng.uniform(-0.9, 2.0);
      for (std::size_t l = 0; l < n; ++l) {
        const double dist = static_cast<double>(l > centre ? l - centre : centre - l);
        w[l] = std::pow(1.0 + dist, gamma);
      }
      break;
    }
  }
  return w;
}

std::vector<double> generate_terminal(MartingaleFamily family, int depth, CounterRng& rng) {
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> x(n);
  switch (family) {
    case MartingaleFamily::Gaussian:
      for (double& v : x) v = rng.normal();
      break;
    case MartingaleFamily::Rademacher:
      for (double& v : x) v = rng.sign();
      break;
    case MartingaleFamily::SparseJump:
      for (double& v : x) v = rng.uniform() < 0.05 ? rng.normal() * 10.0 : 0.0;
      x[rng() % n] += 1.0;
      break;
  }
  return x;
}

bool RubioResult::ok() const {
  return min_excess >= 0.0 && norm_ratio <= norm_bound * (1.0 + kRoundoff) &&
         a1 <= a1_bound * (1.0 + kRoundoff);
}

RubioResult rubio_de_francia(std::span<const double> f, double p, std::span<const double> w, int k_max) {
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  for (double x : f) {
    if (!(x >= 0.0)) throw DomainError("Rubio de Francia iteration needs nonnegative f");
  }
  RubioResult out;
  out.char_W = ap_characteristic(w, p);
  out.m = extrapolation::maximal_norm_bound(p, out.char_W).explicit_bound;
  const double two_m = 2.0 * out.m;
  std::vector<double> iterate(f.begin(), f.end());
  out.rf = iterate;
  double factor = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    iterate = maximal_operator(iterate);
    factor /= two_m;
    for (std::size_t l = 0; l < iterate.size(); ++l) out.rf[l] += iterate[l] * factor;
  }
  const std::vector<double> tail = maximal_operator(iterate);

  out.min_excess = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < f.size(); ++l) out.min_excess = std::min(out.min_excess, out.rf[l] - f[l]);
  const double fn = weighted_lp_norm(f, w, p);
  out.norm_ratio = fn > 0.0 ? weighted_lp_norm(out.rf, w, p) / fn : 0.0;
  out.norm_bound = 2.0 + std::ldexp(1.0, -k_max);
  out.empirical_m_ratio = fn > 0.0 ? weighted_lp_norm(maximal_operator(f), w, p) / fn : 0.0;

  bool positive = true;
  for (double x : out.rf) positive = positive && x > 0.0;
  double trunc = 0.0;
  if (positive) {
    out.a1 = a1_characteristic(out.rf);
    for (std::size_t l = 0; l < tail.size(); ++l) trunc = std::max(trunc, tail[l] * factor / out.rf[l]);
  }
  out.a1_bound = two_m + trunc;
  return out;
}

ComposeResult compose_weights(std::span<const double> w, std::span<const double> u, double p, double p0,
                              ComposeMode mode) {
  if (w.size() != u.size()) throw UsageError("weight sizes differ");
  ComposeResult out;
  out.char_U = a1_characteristic(u);
  out.leaves.resize(w.size());
  if (mode == ComposeMode::I) {
    if (!(p >= 1.0 && p < p0)) throw DomainError("mode i needs 1 <= p < p0");
    out.char_W = p == 1.0 ? a1_characteristic(w) : ap_characteristic(w, p);
    for (std::size_t l = 0; l < w.size(); ++l) out.leaves[l] = w[l] * std::pow(u[l], p - p0);
    out.bound = out.char_W * std::pow(out.char_U, p0 - p);
  } else {
    if (!(p0 > 1.0 && p0 < p)) throw DomainError("mode ii needs 1 < p0 < p");
    out.char_W = ap_characteristic(w, p);
    for (std::size_t l = 0; l < w.size(); ++l) {
      out.leaves[l] = std::pow(std::pow(w[l], p0 - 1.0) * std::pow(u[l], p - p0), 1.0 / (p - 1.0));
    }
    out.bound = std::pow(out.char_W, (p0 - 1.0) / (p - 1.0)) * std::pow(out.char_U, (p - p0) / (p - 1.0));
  }
  out.characteristic = ap_characteristic(out.leaves, p0);
  return out;
}

ScanReport check_rubio(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kPs[] = {1.5, 2.0, 3.0, 4.0};
  ScanReport report = run_trials("rubio", cfg.exec, cfg.trials, 0.0, [&](std::size_t i, ScanReport& part) {
    CounterRng rng(cfg.seed, kRubioStream, i);
    const double p = kPs[i % 4];
    const int depth = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.max_depth));
    const auto family = static_cast<WeightFamily>(1 + (i / 4) % 3);
    const auto w = generate_weight(family, depth, rng);
    const auto f = random_nonnegative(depth, rng);
    const RubioResult r = rubio_de_francia(f, p, w);
    const std::vector<std::pair<std::string, double>> at{
        {"trial", static_cast<double>(i)}, {"p", p}, {"depth", depth}, {"char_W", r.char_W}, {"m", r.m}};
    part.add(trial_record("rubio.f<=Rf", -r.min_excess, 1.0, i, at));
    part.add(trial_record("rubio.norm", r.norm_ratio - r.norm_bound * (1.0 + kRoundoff), 1.0, i, at));
    part.add(trial_record("rubio.a1", r.a1 - r.a1_bound * (1.0 + kRoundoff), r.a1_bound, i, at));
  });
  report.seed = cfg.seed;
  report.parameters = {{"trials", static_cast<double>(cfg.trials)}, {"max_depth", cfg.max_depth}, {"k_max", 64}};
  report.wall_seconds = seconds_since(start);
  return report;
}

ScanReport check_compose(const SuiteConfig& cfg, double p, double p0) {
  const auto start = std::chrono::steady_clock::now();
  const ComposeMode mode = p < p0 ? ComposeMode::I : ComposeMode::II;
  const std::uint64_t stream = kComposeStream ^ (p_tag(p) << 20) ^ (p_tag(p0) << 40);
  ScanReport report = run_trials("compose", cfg.exec, cfg.trials, 0.0, [&](std::size_t i, ScanReport& part) {
    CounterRng rng(cfg.seed, stream, i);
    const int depth = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.max_depth));
    const auto w = generate_weight(static_cast<WeightFamily>(1 + i % 3), depth, rng);
    std::vector<double> u;
    switch ((i / 3) % 3) {
      case 0: u.assign(w.size(), 1.0); break;
      case 1: u = generate_weight(static_cast<WeightFamily>(1 + (i / 9) % 3), depth, rng); break;
      default: {
        // A_1 weight from the iteration, with a positive floor so every leaf is > 0.
        auto f = random_nonnegative(depth, rng);
        for (double& x : f) x += 1e-3;
        u = rubio_de_francia(f, 2.0, std::vector<double>(f.size(), 1.0), 16).rf;
      }
    }
    const ComposeResult r = compose_weights(w, u, p, p0, mode);
    part.add(trial_record("compose.bound", r.characteristic - r.bound * (1.0 + kRoundoff), r.bound, i,
                          {{"trial", static_cast<double>(i)}, {"depth", depth}, {"char_W", r.char_W},
                           {"char_U", r.char_U}, {"char", r.characteristic}}));
  });
  report.seed = cfg.seed;
  report.parameters = {{"p", p}, {"p0", p0}, {"trials", static_cast<double>(cfg.trials)}};
  report.wall_seconds = seconds_since(start);
  return report;
}

ScanReport check_maximal_bound(const SuiteConfig& cfg, double p) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report = run_trials("maximal_bound", cfg.exec, cfg.trials, 0.0, [&](std::size_t i, ScanReport& part) {
    CounterRng rng(cfg.seed, kMaximalStream ^ (p_tag(p) << 24), i);
    const int depth = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.max_depth));
    const auto w = generate_weight(static_cast<WeightFamily>(i % 4), depth, rng);
    const auto f = random_nonnegative(depth, rng);
    const double ch = ap_characteristic(w, p);
    const double bound = extrapolation::maximal_norm_bound(p, ch).explicit_bound;
    const double ratio = weighted_lp_norm(maximal_operator(f), w, p) / weighted_lp_norm(f, w, p);
    part.add(trial_record("maximal_bound.weighted", ratio - bound * (1.0 + kRoundoff), bound, i,
                          {{"trial", static_cast<double>(i)}, {"char_W", ch}, {"ratio", ratio}}));
    const std::vector<double> one(f.size(), 1.0);
    const double doob = weighted_lp_norm(maximal_operator(f), one, p) / weighted_lp_norm(f, one, p);
    const double doob_bound = p / (p - 1.0);
    part.add(trial_record("maximal_bound.doob", doob - doob_bound * (1.0 + kRoundoff), doob_bound, i,
                          {{"trial", static_cast<double>(i)}, {"ratio", doob}}));
  });
  report.seed = cfg.seed;
  report.parameters = {{"p", p}, {"trials", static_cast<double>(cfg.trials)}};
  report.wall_seconds = seconds_since(start);
  return report;
}

MainInequalityStats test_main_inequality(double p, std::uint64_t trials, int depth, std::uint64_t seed,
                                         Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  if (depth < 1) throw DomainError("depth must be at least 1");
  const double kp = extrapolation::kp_constant(p);
  const double ex = extrapolation::ap_exponent(p);
  struct Trial {
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double ch = 1.0;
    bool unit = false;
  };
  const auto results = map_indices<Trial>(exec, trials, [&](std::size_t i) {
    CounterRng rng(seed, kMainStream ^ (p_tag(p) << 24), i);
    // Every tenth trial is unweighted; the rest cycle through the families.
    const WeightFamily family = i % 10 == 9 ? WeightFamily::Unit : static_cast<WeightFamily>(1 + i % 3);
    const auto w = generate_weight(family, depth, rng);
    const auto xn = generate_terminal(static_cast<MartingaleFamily>((i / 3) % 3), depth, rng);
    Trial t;
    t.unit = family == WeightFamily::Unit;
    t.ch = ap_characteristic(w, p);
    const double denom = weighted_lp_norm(xn, w, p);
    if (denom > 0.0) {
      const DyadicTree mart(xn);
      t.ratio = weighted_lp_norm(square_function_leaves(mart), w, p) / denom;
    }
    return t;
  });
  MainInequalityStats st;
  st.p = p;
  st.trials = trials;
  st.report.check_name = "main_inequality";
  st.report.tolerance = 0.0;
  st.report.seed = seed;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Trial& t = results[i];
    st.ratios.push_back(t.ratio);
    st.chars.push_back(t.ch);
    if (std::isnan(t.ratio)) {
      ++st.skipped;
      continue;
    }
    const double bound = kp * std::pow(t.ch, ex);
    st.max_ratio = std::max(st.max_ratio, t.ratio);
    st.max_ratio_over_bound = std::max(st.max_ratio_over_bound, t.ratio / bound);
    st.max_char = std::max(st.max_char, t.ch);
    if (t.unit) st.unweighted_max_ratio = std::max(st.unweighted_max_ratio, t.ratio);
    st.report.add(trial_record("main_inequality.bound", t.ratio - bound, bound, i,
                               {{"p", p}, {"char_W", t.ch}, {"ratio", t.ratio}}));
  }
  st.violations = st.report.violations;
  st.report.parameters = {{"p", p}, {"trials", static_cast<double>(trials)}, {"depth", depth},
                          {"skipped", static_cast<double>(st.skipped)}};
  st.report.wall_seconds = seconds_since(start);
  return st;
}

namespace {

bool inside(double w, double v, double c) {
  if (!(w > 0.0) || !(v > 0.0)) return false;
  const double t = w * v * v;
  return t >= 1.0 && t <= c;
}

// delta with ((w - delta)^{-1/2} + (w + delta)^{-1/2}) / 2 = v; requires w v^2 >= 1.
double terminal_split(double w, double v) {
  double lo = 0.0;
  double hi = w;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double mean = 0.5 * (1.0 / std::sqrt(w - mid) + 1.0 / std::sqrt(w + mid));
    (mean < v ? lo : hi) = mid;
  }
  return lo;
}

struct DriftChunk {
  std::vector<double> sum_b, sum_b2, sum_abs_b, sum_d, sum_d2;
  double sum_fun = 0.0, sum_fun2 = 0.0;
  std::uint64_t frozen = 0, steps = 0, n = 0;
};

}  // namespace

DriftStats bellman_drift_probe(const DriftConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const bellman::Params params = bellman::derive_params(cfg.c);
  const double w0 = cfg.w0;
  const double v0 = cfg.v0 > 0.0 ? cfg.v0 : std::sqrt(std::sqrt(cfg.c) / w0);
  if (!inside(w0, v0, cfg.c)) throw DomainError("drift probe must start inside 1 <= wv^2 <= c");
  if (!(cfg.h > 0.0) || cfg.n_steps < 1 || cfg.trials < 2) throw DomainError("need h > 0, steps >= 1, trials >= 2");
  const std::size_t stages = static_cast<std::size_t>(cfg.n_steps) + 2;
  constexpr std::uint64_t kChunk = 256;
  const std::uint64_t n_chunks = (cfg.trials + kChunk - 1) / kChunk;
  const double k64 = 64.0 * 64.0 * 64.0 * std::pow(cfg.c, 1.5);

  const auto chunks = map_indices<DriftChunk>(cfg.exec, n_chunks, [&](std::size_t chunk) {
    DriftChunk acc;
    acc.sum_b.assign(stages, 0.0);
    acc.sum_b2.assign(stages, 0.0);
    acc.sum_abs_b.assign(stages, 0.0);
    acc.sum_d.assign(stages, 0.0);
    acc.sum_d2.assign(stages, 0.0);
    const std::uint64_t end = std::min<std::uint64_t>(cfg.trials, (chunk + 1) * kChunk);
    for (std::uint64_t trial = chunk * kChunk; trial < end; ++trial) {
      CounterRng rng(cfg.seed, kDriftStream, trial);
      bellman::StatePoint pt{cfg.x0, cfg.x0 * cfg.x0, w0, v0};
      double prev = bellman::eval_B(pt, params);
      auto record = [&](std::size_t stage, double b) {
        acc.sum_b[stage] += b;
        acc.sum_b2[stage] += b * b;
        acc.sum_abs_b[stage] += std::abs(b);
        if (stage > 0) {
          acc.sum_d[stage] += b - prev;
          acc.sum_d2[stage] += (b - prev) * (b - prev);
        }
        prev = b;
      };
      record(0, prev);
      const double dx = cfg.h * cfg.x_scale;
      for (int k = 1; k <= cfg.n_steps; ++k) {
        // Mostly along the level set of t = wv^2 (s = -v r/(2w)), plus a small transverse part.
        const double g = cfg.weight_vol * rng.normal();
        double r = pt.w * g;
        double s = pt.v * (-0.5 * g + cfg.radial_share * cfg.weight_vol * rng.normal());
        const double eps = rng.sign();
        ++acc.steps;
        if (!inside(pt.w + cfg.h * r, pt.v + cfg.h * s, cfg.c) ||
            !inside(pt.w - cfg.h * r, pt.v - cfg.h * s, cfg.c)) {
          r = 0.0;
          s = 0.0;
          ++acc.frozen;
        }
        pt.x += eps * dx;
        pt.y += dx * dx;
        pt.w += eps * cfg.h * r;
        pt.v += eps * cfg.h * s;
        record(static_cast<std::size_t>(k), bellman::eval_B(pt, params));
      }
      const double delta = terminal_split(pt.w, pt.v);
      pt.w += rng.sign() * delta;
      pt.v = 1.0 / std::sqrt(pt.w);
      record(stages - 1, bellman::eval_B(pt, params));
      const double ax = std::abs(pt.x);
      const double fun = (pt.y * std::sqrt(pt.y) - k64 * ax * ax * ax) * pt.w;
      acc.sum_fun += fun;
      acc.sum_fun2 += fun * fun;
      ++acc.n;
    }
    return acc;
  });

  DriftChunk tot;
  tot.sum_b.assign(stages, 0.0);
  tot.sum_b2.assign(stages, 0.0);
  tot.sum_abs_b.assign(stages, 0.0);
  tot.sum_d.assign(stages, 0.0);
  tot.sum_d2.assign(stages, 0.0);
  for (const auto& ch : chunks) {
    for (std::size_t k = 0; k < stages; ++k) {
      tot.sum_b[k] += ch.sum_b[k];
      tot.sum_b2[k] += ch.sum_b2[k];
      tot.sum_abs_b[k] += ch.sum_abs_b[k];
      tot.sum_d[k] += ch.sum_d[k];
      tot.sum_d2[k] += ch.sum_d2[k];
    }
    tot.sum_fun += ch.sum_fun;
    tot.sum_fun2 += ch.sum_fun2;
    tot.frozen += ch.frozen;
    tot.steps += ch.steps;
    tot.n += ch.n;
  }
  const double n = static_cast<double>(tot.n);
  auto mean_se = [n](double s, double s2) {
    const double m = s / n;
    const double var = std::max(0.0, (s2 / n - m * m) * n / (n - 1.0));
    return std::pair{m, std::sqrt(var / n)};
  };

  DriftStats st;
  st.frozen_steps = tot.frozen;
  st.total_steps = tot.steps;
  st.report.check_name = "bellman_drift";
  st.report.tolerance = 0.0;
  st.report.seed = cfg.seed;
  for (std::size_t k = 0; k < stages; ++k) {
    const auto [m, se] = mean_se(tot.sum_b[k], tot.sum_b2[k]);
    st.mean.push_back(m);
    st.se.push_back(se);
    if (k == 0) {
      st.drift_mean.push_back(0.0);
      st.drift_se.push_back(0.0);
      continue;
    }
    const auto [dm, dse] = mean_se(tot.sum_d[k], tot.sum_d2[k]);
    st.drift_mean.push_back(dm);
    st.drift_se.push_back(dse);
    const double mean_abs = tot.sum_abs_b[k] / n;
    st.max_positive_drift = std::max(st.max_positive_drift, dm - 3.0 * dse);
    st.max_relative_positive_drift = std::max(st.max_relative_positive_drift, dm / (1.0 + mean_abs));
    st.report.add(trial_record("drift.step", dm - 3.0 * dse, 1.0 + mean_abs, k,
                               {{"drift", dm}, {"se", dse}}));
  }
  // Total change start -> end: sum of increments per trial has the telescoped variance.
  double total_s = 0.0;
  for (std::size_t k = 1; k < stages; ++k) total_s += tot.sum_d[k];
  const double total_mean = total_s / n;
  const double end_se = st.se.back();
  st.report.add(trial_record("drift.terminal<=initial", total_mean - 3.0 * end_se, 1.0 + std::abs(st.mean[0]),
                             stages, {{"initial", st.mean.front()}, {"terminal", st.mean.back()}}));
  const auto [fm, fse] = mean_se(tot.sum_fun, tot.sum_fun2);
  st.terminal_functional = fm;
  st.terminal_functional_se = fse;
  st.report.add(trial_record("drift.terminal_functional<=0", fm - 3.0 * fse, 1.0 + std::abs(fm), stages + 1,
                             {{"value", fm}, {"se", fse}}));
  const double frozen_frac = static_cast<double>(tot.frozen) / static_cast<double>(std::max<std::uint64_t>(1, tot.steps));
  // Freezing is the only way the walk is kept inside when c = 1.
  if (cfg.c > 1.0) {
    st.report.add(trial_record("drift.frozen_fraction<1%", frozen_frac - 0.01, 1.0, stages + 2,
                               {{"fraction", frozen_frac}}));
  }
  st.report.parameters = {{"c", cfg.c},       {"h", cfg.h},         {"n_steps", cfg.n_steps},
                          {"trials", static_cast<double>(cfg.trials)}, {"x0", cfg.x0}, {"w0", w0},
                          {"v0", v0},         {"x_scale", cfg.x_scale}, {"weight_vol", cfg.weight_vol},
                          {"radial_share", cfg.radial_share}};
  st.report.wall_seconds = seconds_since(start);
  return st;
}

}  // namespace wsq::dyadic
