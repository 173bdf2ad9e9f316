#pragma once

// Scan-based certification of the special function: the initial condition,
// the majorization, the gluing order between branches, per-region concavity,
// and the matrix and scalar reductions used in the lemma-level arguments.
//
// Every check is a pure function of (params, config). Random samples are
// drawn from a counter-based stream keyed by the sample index, and per-sample
// outcomes are merged in index order, so reports do not depend on the
// execution policy or worker count.

#include <cstdint>
#include <span>
#include <vector>

#include "wsq/bellman.hpp"
#include "wsq/parallel.hpp"
#include "wsq/scan_report.hpp"
#include "wsq/sym_matrix.hpp"

namespace wsq::verify {

struct ScanConfig {
  std::vector<double> c_list{1.0, 2.0, 10.0, 100.0};
  std::uint64_t n_random = 100000;  ///< random samples per region (or per check)
  int grid_nodes = 5;               ///< nodes per coordinate in the structured grid
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
  Exec exec = Exec::OpenMP;
};

/// B(x, x^2, w, v) <= tol (1 + |x|^3 w), plus the scalar bound
/// 13 (c/t)^beta - 240 * 64 c^{1/2} (c/t) <= 0 on a t-grid.
ScanReport check_initial(const bellman::Params& params, const ScanConfig& cfg);

/// B >= (1/3)(y^{3/2} w - (64 c^{1/2})^3 |x|^3 w) on every region.
ScanReport check_majorization(const bellman::Params& params, const ScanConfig& cfg);

/// B1 <= B2 on D1, B2 <= min(B1, B3) on D2, B3 <= B2 on D3, B2 = B3 on y^{1/2} = 4|x|.
ScanReport check_gluing(const bellman::Params& params, const ScanConfig& cfg);

/// xi''(0) <= tol * scale for the region's own branch, along `dirs_per_point`
/// random directions (plus the three scaled axes) at every sample. When
/// c = 1 the only admissible t is 1, and the closure t = 1 is checked.
ScanReport check_concavity(const bellman::Params& params, const ScanConfig& cfg, int dirs_per_point);

/// Closed-form xi''(0) against the five-point finite-difference oracle on
/// `cfg.n_random` random (point, direction) pairs per region; passes when
/// |closed - fd| <= rel_tol * scale.
ScanReport check_hessian_oracle(const bellman::Params& params, const ScanConfig& cfg,
                                double rel_tol = 1e-5);

/// Scalar reduction 3(t - 1/2)(c - t/2) - (1 - 1/(4c)) t >= 0 on `t_grid`, and
/// D^2 F - diag(v^2 phi''(t)/2, 0) nonpositive-definite at (w, v) on each t.
ScanReport check_F_hessian(const bellman::Params& params, std::span<const double> t_grid,
                           double tolerance = 1e-9);

/// The 2x2 matrix D^2 F(w, v) - diag(v^2 phi''(t)/2, 0).
SymMatrix2 f_hessian_excess(double w, double v, const bellman::Params& params);

/// Value of 3(t - 1/2)(c - t/2) - (1 - 1/(4c)) t.
double f_hessian_reduction(double t, double c);

struct LemmaB2Matrices {
  SymMatrix3 a1;
  SymMatrix3 a2;
  SymMatrix3 a3;
  SymMatrix3 reduced;
};

/// Matrices of the b_2 argument at a D_2-closure point. Throws DomainError when
/// 4|x| <= y^{1/2} <= 16 (c/t)^{1-beta} c^{1/2} |x| or |gamma| <= 1/24 fails.
LemmaB2Matrices build_lemma_b2_matrices(const bellman::StatePoint& pt, const bellman::Params& params,
                                        double gamma);

/// Reduced 3x3 matrix for ratio = x^2 / y and gamma.
SymMatrix3 reduced_b2_matrix(double ratio, double gamma);

/// Reduced matrix NPD over ratio in [0, 1/16] x gamma in [-1/24, 1/24] with the given step.
ScanReport check_reduced_matrix_grid(double step, double tolerance = 1e-12);

/// xi''_{b2}(0) - gamma (c/t)^beta x y^{1/2} d r <= tol * scale on D_2-closure
/// samples, for every gamma in `gamma_grid`; also A2 >= (c/t)^beta y^{1/2} A3
/// and A1 - A3 + Gamma NPD at each sample point.
ScanReport check_lemma_b2(const bellman::Params& params, const ScanConfig& cfg,
                          std::span<const double> gamma_grid);

/// Lower bounds for xi''_{b4} and xi''_{b3 + 1152 b4}, G <= 6v, and the
/// 2x2 matrix A built from the Hessian of G being NPD, on samples from all regions.
ScanReport check_lemma_b4(const bellman::Params& params, const ScanConfig& cfg);

/// Matrix A = [[G_ww, G_wv], [G_wv, G_vv + (3/2) c^{-1/2} v^{-1}]].
SymMatrix2 lemma_b4_matrix(double w, double v, const bellman::Params& params);

/// Evenly spaced grid of `nodes` values in [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int nodes);

/// Runs every Bellman check above for one c and returns the reports in a fixed order.
std::vector<ScanReport> run_all_checks(const bellman::Params& params, const ScanConfig& cfg,
                                       int dirs_per_point = 16);

}  // namespace wsq::verify
