#pragma once

// Closed-form special function for the weighted L^3 square-function estimate.
//
// A state is (x, y, w, v) with y >= 0 and 1 <= t = w v^2 <= c. The function is
// glued from three branches B_1, B_2, B_3 over the angular regions D_1, D_2,
// D_3, each branch a fixed linear combination of the blocks b_1 ... b_5.

#include <array>
#include <functional>
#include <optional>
#include <string_view>

namespace wsq::bellman {

struct Params {
  double c = 1.0;      ///< bound on the A_3 characteristic, c >= 1
  double a = 0.5;      ///< shift inside (t - a)^alpha
  double alpha = 0.75; ///< 1 - 1/(4c)
  double beta = 0.75;
};

/// (c, 1/2, 1 - 1/(4c), 3/4). Throws DomainError for c < 1.
Params derive_params(double c);

struct StatePoint {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double v = 1.0;

  double t() const { return w * v * v; }
};

/// Perturbation (x + s d, y + s^2 d^2, w + s r, v + s s') used by the concavity test.
struct Direction {
  double d = 0.0;
  double r = 0.0;
  double s = 0.0;
};

enum class Region { D1 = 1, D2 = 2, D3 = 3 };

std::string_view region_name(Region region);

/// Relative slack allowed on 1 <= t <= c when testing domain membership.
inline constexpr double kDomainSlack = 1e-12;

bool in_domain(const StatePoint& pt, const Params& params);

/// Threshold 16 c^{1/2} |x| (c/t)^{1-beta} on y^{1/2} separating D_1 from D_2.
double d1_threshold(const StatePoint& pt, const Params& params);

/// y^{1/2} <= 4|x| -> D3 (boundary included), y^{1/2} >= d1_threshold -> D1, else D2.
Region classify_region(const StatePoint& pt, const Params& params);

/// Value of b_i, i in 1..5. Throws UsageError for other indices.
double eval_block(int index, const StatePoint& pt, const Params& params);

/// Branch formula B_i evaluated regardless of which region the point lies in.
double eval_branch(Region branch, const StatePoint& pt, const Params& params);

/// B(pt) = B_i(pt) with i = classify_region(pt). Throws DomainError outside D_c.
double eval_B(const StatePoint& pt, const Params& params);

/// A quadratic-form value together with the sum of absolute values of the
/// terms that produced it; the latter is the scale for relative tolerances.
struct QuadForm {
  double value = 0.0;
  double scale = 0.0;
};

/// Closed-form xi''(0) for a branch, without the t > 1 precondition.
/// Used for closure points (t = 1) where the lemma bounds still apply.
QuadForm second_variation(Region branch, const StatePoint& pt, const Params& params,
                          const Direction& dir);

/// Closed-form xi''(0) of a single block b_i.
QuadForm block_second_variation(int index, const StatePoint& pt, const Params& params,
                                const Direction& dir);

/// Coefficients of a combination sum_i k_i b_i + k_q (-2 x^2 y^{1/2} w) + k_r (-y^{3/2} w / 8).
struct BlockCombination {
  std::array<double, 5> blocks{};
  double quadratic = 0.0;  ///< coefficient on -2 x^2 y^{1/2} w
  double correction = 0.0; ///< coefficient on -y^{3/2} w / 8
};

BlockCombination branch_combination(Region branch);

QuadForm combination_second_variation(const BlockCombination& combo, const StatePoint& pt,
                                      const Params& params, const Direction& dir);

/// xi''(0) = B_xx d^2 + 2 B_y d^2 + B_ww r^2 + B_vv s^2 + 2 B_xw d r + 2 B_xv d s + 2 B_wv r s
/// for the branch of `region_override` (or of the point's own region).
/// Throws PreconditionError when t <= 1 and DomainError outside D_c.
QuadForm xi_second(const StatePoint& pt, const Params& params, const Direction& dir,
                   std::optional<Region> region_override = std::nullopt);

/// Five-point central second difference of tau -> f(tau) at 0.
double central_second_difference(const std::function<double(double)>& f, double h);

/// Finite-difference counterpart of xi_second, evaluating B (or the fixed
/// branch) along the curve. Throws StencilError when a stencil point leaves
/// D_c (only when `strict_domain`), crosses x = 0, or changes region when no
/// branch is fixed.
double xi_second_fd(const StatePoint& pt, const Params& params, const Direction& dir, double h,
                    std::optional<Region> branch = std::nullopt, bool strict_domain = true);

}  // namespace wsq::bellman
