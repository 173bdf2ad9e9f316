// Acceptance run: criteria 1-7 at full size. Prints one line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "wsq/bellman_verify.hpp"
#include "wsq/brownian.hpp"
#include "wsq/circle_operators.hpp"
#include "wsq/cli.hpp"
#include "wsq/dyadic.hpp"
#include "wsq/dyadic_sim.hpp"
#include "wsq/extrapolation.hpp"
#include "wsq/report.hpp"

using namespace wsq;

namespace {

const std::vector<double> kCs{1.0, 2.0, 10.0, 100.0};

struct Outcome {
  bool pass = true;
  std::string detail;
};

void need(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += "[failed: " + what + "] ";
  }
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void need_report(Outcome& o, const ScanReport& r, const std::string& tag) {
  need(o, r.passed() && r.samples > 0,
       tag + " " + r.check_name + " violations=" + std::to_string(r.violations) + "/" + std::to_string(r.samples));
}

Outcome criterion1() {
  Outcome o;
  verify::ScanConfig cfg;
  cfg.n_random = 100000;
  cfg.tolerance = 1e-9;
  std::uint64_t samples = 0;
  double worst = -1e300;
  for (double c : kCs) {
    const auto params = bellman::derive_params(c);
    const std::string tag = "c=" + fmt("%g", c);
    for (const auto& r : {verify::check_initial(params, cfg), verify::check_majorization(params, cfg),
                          verify::check_gluing(params, cfg), verify::check_concavity(params, cfg, 16)}) {
      need_report(o, r, tag);
      samples += r.samples;
      worst = std::max(worst, r.worst_relative_margin());
    }
  }
  o.detail += std::to_string(samples) + " evaluations, worst relative margin " + fmt("%.3g", worst);
  return o;
}

Outcome criterion2() {
  Outcome o;
  verify::ScanConfig cfg;
  cfg.n_random = 10000;
  std::uint64_t samples = 0;
  double worst = -1e300;
  for (double c : kCs) {
    const auto r = verify::check_hessian_oracle(bellman::derive_params(c), cfg, 1e-5);
    need_report(o, r, "c=" + fmt("%g", c));
    samples += r.samples;
    worst = std::max(worst, r.worst_relative_margin());
  }
  o.detail += std::to_string(samples) + " pairs, worst |closed - fd| / scale " + fmt("%.3g", worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  // (i) scalar reduction on t-grids; zero only at (t, c) = (1, 1); (6t - 1)(t - 1)/4 on the diagonal.
  double min_pos = 1e300;
  for (double c : kCs) {
    const auto params = bellman::derive_params(c);
    const auto ts = verify::linear_grid(1.0, c, 1001);
    need_report(o, verify::check_F_hessian(params, ts), "c=" + fmt("%g", c));
    for (double t : ts) {
      const double r = verify::f_hessian_reduction(t, c);
      const bool corner = (t == 1.0 && c == 1.0);
      need(o, corner ? std::abs(r) <= 1e-15 : r > 0.0, "reduction sign at t=" + fmt("%g", t));
      if (!corner) min_pos = std::min(min_pos, r);
    }
  }
  for (double t : verify::linear_grid(1.0, 100.0, 991)) {
    const double r = verify::f_hessian_reduction(t, t);
    need(o, std::abs(r - (6.0 * t - 1.0) * (t - 1.0) / 4.0) <= 1e-12 * (1.0 + r), "diagonal pattern t=" + fmt("%g", t));
  }
  // (ii) reduced matrix on the full grid.
  const auto grid = verify::check_reduced_matrix_grid(1e-3);
  need_report(o, grid, "");
  // (iii) b4 and b3 + 1152 b4 lower bounds, about 1e5 samples per c.
  verify::ScanConfig cfg;
  cfg.n_random = 100000;
  std::uint64_t b4 = 0;
  for (double c : kCs) {
    const auto r = verify::check_lemma_b4(bellman::derive_params(c), cfg);
    need_report(o, r, "c=" + fmt("%g", c));
    b4 += r.samples;
  }
  o.detail += "reduction min off (1,1) " + fmt("%.3g", min_pos) + ", matrix grid " + std::to_string(grid.samples) +
              " nodes max eig " + fmt("%.4g", grid.worst->margin) + ", b4 evaluations " + std::to_string(b4);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const double phi1 = extrapolation::phi_prefactor(1.0);
  need(o, phi1 > 552.0 && phi1 < 553.0, "phi(1) range");
  need_report(o, extrapolation::verify_prefactors(10000), "");
  const double up = extrapolation::upper_prefactor();
  need(o, up > 187.9 && up < 189.0, "upper prefactor range");
  need(o, extrapolation::kp_constant(3.0) == 276.5, "K_3");
  const double d = extrapolation::solve_d(2.0, 4.0);
  need(o, std::abs(d - std::sqrt(3.0) / 2.0) <= 1e-10, "d(2,4)");
  const auto chain = extrapolation::check_norm_chain(verify::linear_grid(1.1, 10.0, 90), verify::linear_grid(1.0, 100.0, 100));
  need_report(o, chain, "");
  o.detail += "phi(1)=" + fmt("%.6f", phi1) + " upper=" + fmt("%.6f", up) + " K_3=" +
              fmt("%g", extrapolation::kp_constant(3.0)) + " |d(2,4)-sqrt3/2|=" + fmt("%.2g", std::abs(d - std::sqrt(3.0) / 2.0)) +
              " chain samples " + std::to_string(chain.samples);
  return o;
}

double mean_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i];
  return s / static_cast<double>(hi - lo);
}

Outcome criterion5() {
  Outcome o;
  // Enumeration oracles on power-of-two leaves, where every average is exact.
  int compared = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    CounterRng rng(5, 5, i);
    const int depth = 1 + static_cast<int>(i % 4);
    std::vector<double> w(std::size_t{1} << depth);
    for (double& x : w) x = std::ldexp(1.0, static_cast<int>(rng() % 7) - 3);
    double ap = 0.0, a1 = 0.0;
    for (std::size_t len = w.size(); len >= 1; len /= 2) {
      for (std::size_t lo = 0; lo < w.size(); lo += len) {
        double dual = 0.0;
        for (std::size_t k = lo; k < lo + len; ++k) dual += 1.0 / w[k];
        ap = std::max(ap, mean_of(w, lo, lo + len) * dual / static_cast<double>(len));
      }
    }
    for (std::size_t l = 0; l < w.size(); ++l) {
      double m = 0.0;
      for (std::size_t len = w.size(); len >= 1; len /= 2) m = std::max(m, mean_of(w, l / len * len, l / len * len + len));
      a1 = std::max(a1, m / w[l]);
    }
    need(o, dyadic::ap_characteristic(w, 2.0) == ap, "ap enumeration trial " + std::to_string(i));
    need(o, dyadic::a1_characteristic(w) == a1, "a1 enumeration trial " + std::to_string(i));
    ++compared;
    if (!o.pass) break;
  }
  dyadic::SuiteConfig cfg;
  cfg.trials = 1000;
  cfg.max_depth = 10;
  need_report(o, dyadic::check_rubio(cfg), "");
  for (double p : {1.0, 2.0, 4.0}) need_report(o, dyadic::check_compose(cfg, p, 3.0), "p=" + fmt("%g", p));
  double worst = 0.0;
  for (double p : {2.0, 3.0, 4.0}) {
    const auto st = dyadic::test_main_inequality(p, 10000, 10, 42);
    need_report(o, st.report, "p=" + fmt("%g", p));
    worst = std::max(worst, st.max_ratio_over_bound);
  }
  o.detail += std::to_string(compared) + " exact enumerations; max main-inequality ratio/bound " + fmt("%.3g", worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto cosf = circle::closed_form("cos");
  const circle::QuadratureSpec quad;
  const auto spec = circle::gstar_spectrum(cosf, quad);
  const double avg = 2.0 * spec.moments[0].real();
  need(o, std::abs(avg - 0.5) <= 0.005, "g* average within 1%");
  circle::BrownianConfig bc;
  bc.paths = 100000;
  bc.dt = 1e-4;
  const auto mc = circle::brownian_energy(cosf, bc);
  need(o, std::abs(mc.estimate - 0.5) <= 0.01, "Brownian estimate within 2%");
  need(o, std::abs(mc.estimate - avg) <= 3.0 * mc.std_error + spec.error_estimate, "Brownian vs quadrature within 3 SE");
  double g_err = 0.0;
  for (int l = 0; l < 32; ++l) {
    const double g = circle::lp_g(cosf, 2.0 * std::numbers::pi * l / 32);
    g_err = std::max(g_err, std::abs(g * g - 0.5));
  }
  need(o, g_err <= 1e-6, "g(cos)^2");
  for (double p : {2.0, 3.0, 4.0}) {
    need(o, circle::poisson_ap_characteristic(circle::CircleFunction::constant(1.0), p).value == 1.0, "poisson_ap(1)");
  }
  double worst = 0.0;
  int entries = 0;
  for (const auto& e : circle::builtin_corpus()) {
    for (double p : {2.0, 3.0, 4.0}) {
      const auto r = circle::verify_gstar_inequality(e.f, e.w, p, quad);
      need(o, r.passed(), "g* inequality " + e.name + "/" + e.weight_name);
      worst = std::max(worst, r.ratio);
      ++entries;
    }
  }
  o.detail += "avg=" + fmt("%.7f", avg) + " MC=" + fmt("%.5f", mc.estimate) + "+-" + fmt("%.5f", mc.std_error) +
              " max|g^2-1/2|=" + fmt("%.2g", g_err) + " corpus " + std::to_string(entries) + " cases, max ratio " +
              fmt("%.3g", worst);
  return o;
}

Outcome criterion7() {
  Outcome o;
  cli::RunConfig cfg;
  cfg.subcommand = "all";
  cfg.c_list = {1.0, 2.0, 10.0, 100.0};
  cfg.samples = 2000;
  cfg.grid_nodes = 3;
  cfg.trials = 300;
  cfg.depth = 8;
  cfg.paths = 4000;
  cfg.dt = 1e-3;
  cfg.quad.radial_nodes = 400;
  cfg.ap_grid = {64, 64, 0};
  std::vector<std::string> docs;
  for (const char* workers : {"1", "2", "7"}) {
    setenv("WSQ_WORKERS", workers, 1);
    const auto r = cli::execute(cfg);
    docs.push_back(report::dump(report::without_timing(r.document)));
  }
  unsetenv("WSQ_WORKERS");
  need(o, docs[0] == docs[1] && docs[0] == docs[2], "JSON differs across worker counts");
  o.detail += "workers 1/2/7, " + std::to_string(docs[0].size()) + " bytes each";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 bellman certification", criterion1}, {"2 hessian oracle", criterion2},
      {"3 lemma algebra", criterion3},         {"4 constants", criterion4},
      {"5 dyadic suite", criterion5},          {"6 circle suite", criterion6},
      {"7 determinism", criterion7}};
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %-24s %s  (%.1f s)  %s\n", name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
