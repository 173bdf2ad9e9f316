#include "doctest.h"

#include <cmath>
#include <numeric>

#include "wsq/dyadic.hpp"
#include "wsq/dyadic_sim.hpp"
#include "wsq/errors.hpp"
#include "wsq/extrapolation.hpp"
#include "wsq/report.hpp"

using namespace wsq;
using namespace wsq::dyadic;

namespace {

// Plain left-to-right mean of leaves [lo, hi).
double range_mean(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i];
  return s / static_cast<double>(hi - lo);
}

// Enumerates every dyadic interval directly.
double brute_ap(const std::vector<double>& w, double p) {
  std::vector<double> dual(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) dual[i] = std::pow(w[i], -1.0 / (p - 1.0));
  double best = 0.0;
  for (std::size_t len = w.size(); len >= 1; len /= 2) {
    for (std::size_t lo = 0; lo < w.size(); lo += len) {
      best = std::max(best, range_mean(w, lo, lo + len) * std::pow(range_mean(dual, lo, lo + len), p - 1.0));
    }
  }
  return best;
}

double brute_a1(const std::vector<double>& u) {
  double best = 0.0;
  for (std::size_t l = 0; l < u.size(); ++l) {
    double m = 0.0;
    for (std::size_t len = u.size(); len >= 1; len /= 2) {
      const std::size_t lo = l / len * len;
      m = std::max(m, range_mean(u, lo, lo + len));
    }
    best = std::max(best, m / u[l]);
  }
  return best;
}

std::vector<double> dyadic_rational_leaves(int depth, CounterRng& rng) {
  std::vector<double> v(std::size_t{1} << depth);
  for (double& x : v) x = static_cast<double>(1 + rng() % 64) / 8.0;
  return v;
}

}  // namespace

TEST_SUITE("dyadic") {

TEST_CASE("tree construction") {
  const DyadicTree t(std::vector<double>{2.0, 0.5});
  CHECK(t.root() == 1.25);
  CHECK(t.depth() == 1);
  const DyadicTree k(std::vector<double>(8, 3.5));
  for (int lev = 0; lev <= 3; ++lev) {
    for (double x : k.level(lev)) CHECK(x == 3.5);
  }
  CHECK_THROWS_AS(DyadicTree(std::vector<double>{1.0, 2.0, 3.0}), UsageError);
  CounterRng rng(1, 1, 0);
  std::vector<double> leaves(1024);
  for (double& x : leaves) x = rng.normal() * 1e3 + 1e-3 * rng.normal();
  const DyadicTree big(leaves);
  const double plain = std::accumulate(leaves.begin(), leaves.end(), 0.0) / 1024.0;
  CHECK(std::abs(big.root() - plain) <= 1e-12 * (std::abs(plain) + 1.0));
}

TEST_CASE("characteristic examples") {
  const std::vector<double> w{2.0, 0.5};
  CHECK(ap_characteristic(w, 2.0) == 1.5625);
  CHECK(a1_characteristic(w) == 2.5);
  CHECK(a1_characteristic_nodewise(w) == 2.5);
  CHECK(ap_characteristic(std::vector<double>(16, 7.0), 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a1_characteristic(std::vector<double>(16, 7.0)) == 1.0);
  CHECK_THROWS_AS(ap_characteristic(std::vector<double>{1.0, -1.0}, 2.0), DomainError);
}

TEST_CASE("characteristics match enumeration exactly on dyadic rationals") {
  for (std::uint64_t i = 0; i < 400; ++i) {
    CounterRng rng(17, 1, i);
    const int depth = 1 + static_cast<int>(i % 4);
    const auto w = dyadic_rational_leaves(depth, rng);
    CHECK(a1_characteristic(w) == brute_a1(w));
    // p = 2 keeps the dual 1/w; p = 3 uses a square root, compared to rounding.
    CHECK(ap_characteristic(w, 2.0) == doctest::Approx(brute_ap(w, 2.0)).epsilon(1e-15));
    CHECK(ap_characteristic(w, 3.0) == doctest::Approx(brute_ap(w, 3.0)).epsilon(1e-14));
  }
}

TEST_CASE("characteristics match enumeration on random weights") {
  for (std::uint64_t i = 0; i < 400; ++i) {
    CounterRng rng(17, 2, i);
    const int depth = 1 + static_cast<int>(i % 4);
    const auto w = generate_weight(static_cast<WeightFamily>(i % 4), depth, rng);
    for (double p : {1.5, 2.0, 4.0}) {
      const double c = ap_characteristic(w, p);
      CHECK(c == doctest::Approx(brute_ap(w, p)).epsilon(1e-13));
      CHECK(c >= 1.0 - 1e-15);
    }
    CHECK(a1_characteristic(w) == doctest::Approx(brute_a1(w)).epsilon(1e-14));
  }
}

TEST_CASE("characteristic is 1 only for constant weights") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(17, 3, i);
    auto w = generate_weight(WeightFamily::LogNormal, 3, rng);
    const bool constant = std::all_of(w.begin(), w.end(), [&](double x) { return x == w[0]; });
    CHECK((ap_characteristic(w, 2.0) > 1.0) == !constant);
  }
}

TEST_CASE("A1 characteristic is scale invariant") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(17, 4, i);
    auto u = dyadic_rational_leaves(4, rng);
    const double a = a1_characteristic(u);
    for (double& x : u) x *= 4.0;
    CHECK(a1_characteristic(u) == a);
  }
}

TEST_CASE("square and maximal functions") {
  const auto k = build_martingale(std::vector<double>(4, -2.0));
  CHECK(square_function(k, 1) == 2.0);
  CHECK(maximal_function(k, 3) == 2.0);
  const auto m = build_martingale({1.0, -1.0, 1.0, -1.0});
  for (std::size_t l = 0; l < 4; ++l) CHECK(square_function(m, l) == 1.0);
  // E S^2 = E X_n^2 when X_0 = 0.
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(17, 5, i);
    auto leaves = generate_terminal(MartingaleFamily::Gaussian, 6, rng);
    const double mean = std::accumulate(leaves.begin(), leaves.end(), 0.0) / leaves.size();
    for (double& x : leaves) x -= mean;
    const auto tree = build_martingale(leaves);
    const auto s = square_function_leaves(tree);
    double es2 = 0.0, ex2 = 0.0;
    for (std::size_t l = 0; l < leaves.size(); ++l) {
      es2 += s[l] * s[l];
      ex2 += leaves[l] * leaves[l];
    }
    CHECK(std::abs(es2 - ex2) <= 1e-12 * ex2);
  }
}

TEST_CASE("maximal operator") {
  const auto mf = maximal_operator(std::vector<double>{2.0, 0.5});
  CHECK(mf[0] == 2.0);
  CHECK(mf[1] == 1.25);
  CHECK_THROWS_AS(maximal_operator(std::vector<double>{1.0, -0.5}), DomainError);
}

TEST_CASE("Rubio de Francia on a constant") {
  const std::vector<double> f(8, 2.0);
  const std::vector<double> w(8, 1.0);
  const auto r = rubio_de_francia(f, 2.0, w, 64);
  CHECK(r.ok());
  for (double x : r.rf) {
    CHECK(x >= 2.0);
    CHECK(x <= 4.0);
  }
  CHECK(r.a1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(rubio_de_francia(std::vector<double>{1.0, -1.0}, 2.0, std::vector<double>{1.0, 1.0}), DomainError);
}

TEST_CASE("Rubio de Francia on leaf indicators") {
  for (int depth = 1; depth <= 10; ++depth) {
    const std::size_t n = std::size_t{1} << depth;
    CounterRng rng(17, 6, static_cast<std::uint64_t>(depth));
    const auto w = generate_weight(WeightFamily::LogNormal, depth, rng);
    for (double p : {1.5, 2.0, 4.0}) {
      std::vector<double> f(n, 0.0);
      f[rng() % n] = 1.0;
      const auto r = rubio_de_francia(f, p, w, 64);
      CHECK(r.ok());
      CHECK(r.min_excess >= 0.0);
      CHECK(r.empirical_m_ratio <= r.m);
    }
  }
}

TEST_CASE("weight composition") {
  const std::vector<double> one(16, 1.0);
  const auto triv = compose_weights(one, one, 2.0, 3.0, ComposeMode::I);
  CHECK(triv.characteristic == doctest::Approx(1.0).epsilon(1e-15));
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(17, 7, i);
    const auto w = generate_weight(WeightFamily::LogNormal, 6, rng);
    // U = 1: [W]_{A_3} <= [W]_{A_2}.
    const auto r = compose_weights(w, std::vector<double>(w.size(), 1.0), 2.0, 3.0, ComposeMode::I);
    CHECK(r.characteristic <= ap_characteristic(w, 2.0) * (1.0 + 1e-12));
  }
  CHECK_THROWS_AS(compose_weights(one, one, 3.0, 2.0, ComposeMode::I), DomainError);
  CHECK_THROWS_AS(compose_weights(one, one, 2.0, 3.0, ComposeMode::II), DomainError);
}

TEST_CASE("suite checks pass on small runs") {
  SuiteConfig cfg;
  cfg.trials = 200;
  cfg.max_depth = 8;
  CHECK(check_rubio(cfg).passed());
  CHECK(check_compose(cfg, 1.0, 3.0).passed());
  CHECK(check_compose(cfg, 2.0, 3.0).passed());
  CHECK(check_compose(cfg, 4.0, 3.0).passed());
  for (double p : {1.5, 2.0, 4.0}) CHECK(check_maximal_bound(cfg, p).passed());
}

TEST_CASE("main inequality") {
  // Single +-1 step, unit weight, p = 2: S = |X_1| so the ratio is 1.
  const auto m = build_martingale({1.0, -1.0});
  const std::vector<double> one(2, 1.0);
  const auto s = square_function_leaves(m);
  CHECK(weighted_lp_norm(s, one, 2.0) / weighted_lp_norm(m.leaves(), one, 2.0) == doctest::Approx(1.0));
  for (double p : {2.0, 3.0, 4.0}) {
    const auto st = test_main_inequality(p, 300, 8, 42);
    CHECK(st.violations == 0);
    CHECK(st.max_ratio_over_bound < 1.0);
    CHECK(st.trials == 300);
  }
}

TEST_CASE("drift probe") {
  DriftConfig cfg;
  cfg.trials = 2000;
  cfg.n_steps = 60;
  for (double c : {2.0, 10.0}) {
    cfg.c = c;
    const auto st = bellman_drift_probe(cfg);
    CHECK(st.report.passed());
    CHECK(st.mean.back() <= st.mean.front() + 3.0 * st.se.front() + 3.0 * st.se.back());
  }
  // Frozen X: the drift comes from (W, V) alone.
  cfg.c = 2.0;
  cfg.x_scale = 0.0;
  CHECK(bellman_drift_probe(cfg).report.passed());
}

TEST_CASE("serial and OpenMP suites agree") {
  SuiteConfig cfg;
  cfg.trials = 150;
  cfg.max_depth = 7;
  cfg.exec = Exec::Serial;
  const auto a = check_rubio(cfg);
  const auto sa = test_main_inequality(3.0, 150, 7, 9, Exec::Serial);
  cfg.exec = Exec::OpenMP;
  const auto b = check_rubio(cfg);
  const auto sb = test_main_inequality(3.0, 150, 7, 9, Exec::OpenMP);
  CHECK(report::dump(report::to_json(a)) == report::dump(report::to_json(b)));
  CHECK(report::dump(report::to_json(sa.report)) == report::dump(report::to_json(sb.report)));
  CHECK(sa.max_ratio == sb.max_ratio);
}

}  // TEST_SUITE
