#pragma once

// Square functions of harmonic extensions: g*, g, the Lusin area function,
// the Poissonian A_p characteristic and the weighted g* inequality.

#include <string>
#include <vector>

#include "wsq/circle.hpp"
#include "wsq/parallel.hpp"
#include "wsq/scan_report.hpp"

namespace wsq::circle {

struct QuadratureSpec {
  int radial_nodes = 2000;   ///< J; nodes r_j = 1 - (1 - s_j)^2 on [0, 1 - eps_r]
  int angular_nodes = 512;   ///< theta grid for norms over the circle
  double boundary_cutoff = 1e-4;  ///< eps_r
};

/// Radial moments G_k = int_0^1 T_k(r) r ln(1/r) dr with
/// T_k(r) = sum_m a_{m+k} conj(a_m) r^{2m+2k}; then g*(theta)^2 = 2 (G_0 + 2 Re sum_k G_k e^{ik theta}).
/// The angular integral against the Poisson kernel is carried out exactly on
/// the Fourier side; only the radial integral is a quadrature.
struct GstarSpectrum {
  std::vector<cplx> moments;
  double tail = 0.0;            ///< analytic estimate of the cut-off part, included in moments[0]
  double error_estimate = 0.0;  ///< |J vs J/2| + |tail| (absolute, on g*^2)

  double gstar2(double theta) const;
};

GstarSpectrum gstar_spectrum(const CircleFunction& f, const QuadratureSpec& quad);

/// Same moments in closed form: int_0^1 r^{2n+1} ln(1/r) dr = 1/(2n+2)^2.
GstarSpectrum gstar_spectrum_exact(const CircleFunction& f);

struct GstarValue {
  double value = 0.0;
  double error_estimate = 0.0;  ///< on the value itself
};

GstarValue gstar(const CircleFunction& f, double theta, const QuadratureSpec& quad);

/// (1/2 pi) int g*^2 d theta = (1/pi) int_D ln(1/|z|) |grad u|^2 dA.
double gstar_average(const CircleFunction& f, const QuadratureSpec& quad);

/// (int_0^1 (1 - r) |grad u(r e^{i theta})|^2 dr)^{1/2}, Gauss-Legendre panels.
double lp_g(const CircleFunction& f, double theta);

/// (int_{Gamma_alpha(theta)} |grad u|^2 dA)^{1/2}; throws DomainError unless 0 < alpha < 1.
double lusin_area(const CircleFunction& f, double theta, double alpha);

/// pi a^2 + a (1 - a^2)^{1/2} - a^2 arccos(a).
double stoltz_area(double alpha);

/// Polar boundary of Gamma_alpha(0): radius in direction phi.
double stoltz_radius(double alpha, double phi);

struct PoissonGrid {
  int radial = 256;
  int angular = 256;
  int dft_samples = 0;  ///< 0: max(8N, 512)
};

struct ApEstimate {
  double value = 0.0;         ///< sup over the grid (a lower bound of the true sup)
  double coarse_value = 0.0;  ///< same on the nested half grid
  double refinement_delta = 0.0;
  double dual_truncation = 0.0;  ///< largest dropped coefficient of w^{-1/(p-1)}
};

/// sup over the grid of u_w(z) u_{w^{-1/(p-1)}}(z)^{p-1}; throws DomainError
/// when w is not positive on a dense theta grid.
ApEstimate poisson_ap_characteristic(const CircleFunction& w, double p, const PoissonGrid& grid = {},
                                     Exec exec = Exec::OpenMP);

/// ((1/2 pi) int |h|^p w)^{1/p} by the trapezoid rule on `nodes` points.
double weighted_circle_norm(const std::vector<double>& h_samples, const CircleFunction& w, double p);

struct GstarInequality {
  double lhs = 0.0;
  double f_norm = 0.0;
  double characteristic = 0.0;
  double K_p = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool passed() const { return lhs <= rhs; }
};

GstarInequality verify_gstar_inequality(const CircleFunction& f, const CircleFunction& w, double p,
                                        const QuadratureSpec& quad, const PoissonGrid& grid = {},
                                        Exec exec = Exec::OpenMP);

struct DominationProbe {
  double max_area_ratio = 0.0;  ///< max A_alpha / g*
  double max_g_ratio = 0.0;     ///< max g / g*
};

DominationProbe pointwise_domination_probe(const CircleFunction& f, double alpha,
                                           const std::vector<double>& thetas, const QuadratureSpec& quad,
                                           Exec exec = Exec::OpenMP);

struct CorpusEntry {
  std::string name;
  CircleFunction f;
  std::string weight_name;
  CircleFunction w;
};

/// Constant, cos, cos 3theta, a random degree-8 polynomial, a smoothed step,
/// each paired with the weights 1, 1 + cos(theta)/2 and 2 + cos theta + sin(2 theta)/2.
std::vector<CorpusEntry> builtin_corpus();

/// JSON: {"functions": [{"name", "coefficients": [[re, im], ...]} | {"name", "closed_form"}],
///        "weights": [same shape]}; every function is paired with every weight.
/// Closed forms: "const", "cos", "cos3", "random8", "step", "unit", "cos_half", "mixed".
std::vector<CorpusEntry> parse_corpus(const std::string& json_text);

CircleFunction closed_form(const std::string& tag);

}  // namespace wsq::circle
