#pragma once

// Real trigonometric polynomials on the circle and their harmonic extensions.
// A function of degree N is stored as c_0..c_N with c_{-n} = conj(c_n), so
// f(theta) = sum_{|n| <= N} c_n e^{i n theta}. Its harmonic extension is
// u = Re F with F(z) = c_0 + 2 sum_{n >= 1} c_n z^n.

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace wsq::circle {

using cplx = std::complex<double>;

class CircleFunction {
public:
  CircleFunction() : c_(1, cplx{0.0, 0.0}) {}
  /// c_0..c_N; the imaginary part of c_0 is dropped.
  explicit CircleFunction(std::vector<cplx> coefficients);

  static CircleFunction constant(double value);
  /// a_0 + sum_n (a_n cos n theta + b_n sin n theta); a and b indexed from n = 1.
  static CircleFunction from_cos_sin(double a0, std::span<const double> a, std::span<const double> b);
  /// Degree-N truncation of the DFT of M equispaced samples f(2 pi j / M); needs M > 2N.
  /// Coefficients below the DFT noise floor (8 eps max|sample|) are set to zero.
  static CircleFunction from_samples(std::span<const double> samples, int degree);
  static CircleFunction from_function(const std::function<double(double)>& f, int degree, int samples);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  /// c_n for any integer n (zero beyond the degree).
  cplx coefficient(int n) const;
  std::span<const cplx> coefficients() const { return c_; }

  double operator()(double theta) const;

  /// theta -> f(theta + phi).
  CircleFunction rotated(double phi) const;
  CircleFunction scaled(double k) const;
  CircleFunction plus_constant(double k) const;

  /// (1/2 pi) int |f|^2 = sum_n |c_n|^2.
  double parseval_norm2() const;

  /// Coefficients a_m of F'(z) = sum_{m >= 0} a_m z^m, a_m = 2 (m+1) c_{m+1}.
  std::vector<cplx> derivative_coefficients() const;

private:
  std::vector<cplx> c_;
};

/// Harmonic extension at z; throws DomainError for |z| >= 1.
double poisson_extend(const CircleFunction& f, cplx z);

/// (u_x, u_y) at z = (Re F', -Im F'); throws DomainError for |z| >= 1.
std::array<double, 2> grad_poisson(const CircleFunction& f, cplx z);

/// |grad u|^2 = |F'(z)|^2 from precomputed derivative coefficients (no domain check).
double grad_norm2(std::span<const cplx> deriv, cplx z);

}  // namespace wsq::circle
