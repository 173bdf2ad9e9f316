#include "wsq/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "wsq/errors.hpp"

namespace wsq::dyadic {

namespace {

// Sum with the rounding error carried alongside (TwoSum).
struct Compensated {
  double sum = 0.0;
  double err = 0.0;
};

Compensated add(const Compensated& a, const Compensated& b) {
  const double s = a.sum + b.sum;
  const double bb = s - a.sum;
  const double e = (a.sum - (s - bb)) + (b.sum - bb);
  return {s, a.err + b.err + e};
}

void require_positive(std::span<const double> w) {
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("weights must be positive and finite");
  }
}

}  // namespace

DyadicTree::DyadicTree(std::vector<double> leaves) {
  const std::size_t n = leaves.size();
  if (n == 0 || !std::has_single_bit(n)) throw UsageError("leaf count must be a power of two");
  depth_ = std::countr_zero(n);
  levels_.resize(depth_ + 1);
  std::vector<Compensated> acc(n);
  for (std::size_t i = 0; i < n; ++i) acc[i] = {leaves[i], 0.0};
  levels_[depth_] = std::move(leaves);
  for (int k = depth_ - 1; k >= 0; --k) {
    const std::size_t cells = std::size_t{1} << k;
    const double size = std::ldexp(1.0, depth_ - k);
    levels_[k].resize(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      acc[j] = add(acc[2 * j], acc[2 * j + 1]);
      levels_[k][j] = (acc[j].sum + acc[j].err) / size;
    }
  }
}

std::vector<double> dual_leaves(std::span<const double> w, double p) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  require_positive(w);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::pow(w[i], -1.0 / (p - 1.0));
  return out;
}

double ap_characteristic(std::span<const double> w, double p) {
  const DyadicTree wt(std::vector<double>(w.begin(), w.end()));
  const DyadicTree vt(dual_leaves(w, p));
  double best = 0.0;
  for (int k = 0; k <= wt.depth(); ++k) {
    for (std::size_t j = 0; j < wt.level(k).size(); ++j) {
      best = std::max(best, wt.node(k, j) * std::pow(vt.node(k, j), p - 1.0));
    }
  }
  return best;
}

double a1_characteristic(std::span<const double> u) {
  require_positive(u);
  const DyadicTree tree(std::vector<double>(u.begin(), u.end()));
  double best = 0.0;
  for (std::size_t l = 0; l < tree.leaf_count(); ++l) {
    double m = 0.0;
    for (int k = 0; k <= tree.depth(); ++k) m = std::max(m, tree.along(l, k));
    best = std::max(best, m / u[l]);
  }
  return best;
}

double a1_characteristic_nodewise(std::span<const double> u) {
  require_positive(u);
  const DyadicTree tree(std::vector<double>(u.begin(), u.end()));
  double best = 0.0;
  for (std::size_t l = 0; l < tree.leaf_count(); ++l) {
    double m = 0.0;
    double lowest = tree.root();
    for (int k = 0; k <= tree.depth(); ++k) {
      m = std::max(m, tree.along(l, k));
      lowest = std::min(lowest, tree.along(l, k));
    }
    best = std::max(best, m / lowest);
  }
  return best;
}

double square_function(const DyadicTree& mart, std::size_t leaf) {
  double s = mart.root() * mart.root();
  for (int k = 1; k <= mart.depth(); ++k) {
    const double dx = mart.along(leaf, k) - mart.along(leaf, k - 1);
    s += dx * dx;
  }
  return std::sqrt(s);
}

double maximal_function(const DyadicTree& mart, std::size_t leaf) {
  double m = 0.0;
  for (int k = 0; k <= mart.depth(); ++k) m = std::max(m, std::abs(mart.along(leaf, k)));
  return m;
}

std::vector<double> maximal_operator(std::span<const double> f) {
  for (double x : f) {
    if (!(x >= 0.0)) throw DomainError("the maximal operator acts on nonnegative variables");
  }
  const DyadicTree tree(std::vector<double>(f.begin(), f.end()));
  // Running max pushed down level by level.
  std::vector<double> run{tree.root()};
  for (int k = 1; k <= tree.depth(); ++k) {
    std::vector<double> next(tree.level(k).size());
    for (std::size_t j = 0; j < next.size(); ++j) next[j] = std::max(run[j / 2], tree.node(k, j));
    run = std::move(next);
  }
  return run;
}

std::vector<double> square_function_leaves(const DyadicTree& mart) {
  std::vector<double> run{mart.root() * mart.root()};
  for (int k = 1; k <= mart.depth(); ++k) {
    std::vector<double> next(mart.level(k).size());
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double dx = mart.node(k, j) - mart.node(k - 1, j / 2);
      next[j] = run[j / 2] + dx * dx;
    }
    run = std::move(next);
  }
  for (double& s : run) s = std::sqrt(s);
  return run;
}

double weighted_lp_norm(std::span<const double> f, std::span<const double> w, double p) {
  if (f.size() != w.size()) throw UsageError("function and weight sizes differ");
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double term = std::pow(std::abs(f[i]), p) * w[i];
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::pow(sum / static_cast<double>(f.size()), 1.0 / p);
}

}  // namespace wsq::dyadic
