#pragma once

// Dyadic filtration on 2^n equally likely leaves. Level k of a tree holds the
// conditional averages over the 2^k cells of generation k; level n holds the
// terminal values. Leaf l lies in cell (l >> (n - k)) of level k.

#include <cstddef>
#include <span>
#include <vector>

namespace wsq::dyadic {

class DyadicTree {
public:
  /// Builds all conditional averages with compensated pairwise sums.
  /// Throws UsageError when the leaf count is not a power of two.
  explicit DyadicTree(std::vector<double> leaves);

  int depth() const { return depth_; }
  std::size_t leaf_count() const { return std::size_t{1} << depth_; }
  double node(int level, std::size_t index) const { return levels_[level][index]; }
  std::span<const double> level(int k) const { return levels_[k]; }
  std::span<const double> leaves() const { return levels_[depth_]; }
  double root() const { return levels_[0][0]; }
  /// Value X_k along the path to `leaf`.
  double along(std::size_t leaf, int k) const { return levels_[k][leaf >> (depth_ - k)]; }

private:
  int depth_ = 0;
  std::vector<std::vector<double>> levels_;
};

inline DyadicTree build_martingale(std::vector<double> leaves) { return DyadicTree(std::move(leaves)); }

/// Leaves w^{-1/(p-1)}.
std::vector<double> dual_leaves(std::span<const double> w, double p);

/// max over nodes of W_node (V_node)^{p-1}, V the tree of w^{-1/(p-1)}.
/// Throws DomainError for nonpositive leaves or p <= 1.
double ap_characteristic(std::span<const double> w, double p);

/// max over leaves of (max of the chain averages)/(leaf value).
double a1_characteristic(std::span<const double> u);

/// Node-wise reading: max over chain nodes a and leaves l below a of M(l)/U_a.
double a1_characteristic_nodewise(std::span<const double> u);

/// (X_0^2 + sum_k (X_k - X_{k-1})^2)^{1/2} along the path to `leaf`.
double square_function(const DyadicTree& mart, std::size_t leaf);

/// max_k |X_k| along the path to `leaf`.
double maximal_function(const DyadicTree& mart, std::size_t leaf);

/// Leaves of Mf (max of chain averages) for nonnegative f.
std::vector<double> maximal_operator(std::span<const double> f);

/// All square-function values, one per leaf.
std::vector<double> square_function_leaves(const DyadicTree& mart);

/// (mean over leaves of |f|^p w)^{1/p}.
double weighted_lp_norm(std::span<const double> f, std::span<const double> w, double p);

}  // namespace wsq::dyadic
