#pragma once

// Constants of the extrapolation argument: the Doob-type weighted maximal
// bound, the extrapolated constant L(W), the final K_p, and the Davis bound.

#include <optional>
#include <span>

#include "wsq/scan_report.hpp"

namespace wsq::extrapolation {

/// Unique d in [0, p-1) with c (1+d) (p-1-d)^{p-1} = (p-1)^{p-1}, as (p-1)(1 - solve_gap).
/// Throws DomainError for p <= 1 or c < 1.
double solve_d(double p, double c);

/// u = 1 - d/(p-1) in (0, 1], by bisection on log u of the log residual. For p near 1
/// and large c, u drops far below the spacing of doubles near d, so tight bounds use u.
double solve_gap(double p, double c);

/// ln c + ln(1 + (p-1)(1-u)) + (p-1) ln u.
double gap_log_residual(double p, double c, double u);

/// Residual c(1+d)(p-1-d)^{p-1} - (p-1)^{p-1}, divided by (p-1)^{p-1}.
double d_residual(double p, double c, double d);

struct NormBound {
  double tight = 0.0;          ///< p / (p - 1 - d(p, c))
  double middle = 0.0;         ///< (p/(p-1)) (p c)^{1/(p-1)}
  double explicit_bound = 0.0; ///< (p e/(p-1)) c^{1/(p-1)}
  double naive_middle = 0.0; ///< (p/(p-1)) ((p-1) c)^{1/(p-1)}; may fall below tight
};

NormBound maximal_norm_bound(double p, double c);

/// Bound on the maximal operator on L^{p'}(W^{1-p'}) in terms of [W]_{A_p}: p e c.
double dual_norm_explicit(double p, double c);

struct KpBranches {
  double lower = 0.0;  ///< 553/(p-1), defined for p <= 3
  double upper = 0.0;  ///< 189 p^{1/2}, defined for p >= 3
  double value = 0.0;  ///< K_p; at p = 3 the smaller branch (553/2)
  bool overlap = false;
};

KpBranches kp_branches(double p);
double kp_constant(double p);
/// max{1/2, 1/(p-1)}.
double ap_exponent(double p);

/// Piecewise L(W) of the extrapolation theorem.
double L_constant(double p, double p0, double kappa, double C, double m_norm_p, double m_norm_dual,
                  double char_W);

/// L(W) / [W]^{max exponent} for p0 = 3, kappa = 1/2, C = 64 and the explicit norm bounds.
double L_over_char_power(double p, double char_W);

/// phi(p) = 2^{1-p/3} 64 2^{(3-p)/2} (p e)^{(3-p)/2} (p-1)^{(p-1)/2}, 0^0 = 1.
double phi_prefactor(double p);

/// 2^{5/6} 64 e^{1/2}.
double upper_prefactor();

/// phi nonincreasing on `nodes` grid points of [1, 3], phi(1) < 553, upper_prefactor() < 189.
ScanReport verify_prefactors(int nodes = 10000);

/// tight <= middle <= explicit on the (p, c) product grid.
ScanReport check_norm_chain(std::span<const double> p_grid, std::span<const double> c_grid);

/// (8/pi^2)^{1/2} (4 Gamma((p+1)/2))^{1/p}. Throws DomainError for p < 2.
double davis_gamma_bound(double p);

struct ConstantsReport {
  double p = 0.0;
  double c = 1.0;
  double d_pc = 0.0;
  double m_norm_tight = 0.0;
  double m_norm_explicit = 0.0;
  double K_p = 0.0;
  double exponent = 0.0;
  std::optional<double> L_W;
  KpBranches branches;
  NormBound norm;
};

/// Everything above for one (p, c); L_W is filled for p != 3 using c as [W].
ConstantsReport constants_report(double p, double c);

}  // namespace wsq::extrapolation
