#include "wsq/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wsq/errors.hpp"

namespace wsq::circle {

namespace {

void require_inside(cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("point must lie in the open unit disc");
}

// Real arithmetic: std::complex multiplication carries NaN/inf recovery that the hot loops do not need.
cplx horner(std::span<const cplx> a, cplx z) {
  double re = 0.0, im = 0.0;
  const double zr = z.real(), zi = z.imag();
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    const double t = re * zr - im * zi + it->real();
    im = re * zi + im * zr + it->imag();
    re = t;
  }
  return {re, im};
}

}  // namespace

CircleFunction::CircleFunction(std::vector<cplx> coefficients) : c_(std::move(coefficients)) {
  if (c_.empty()) c_.push_back({0.0, 0.0});
  c_[0] = {c_[0].real(), 0.0};
}

CircleFunction CircleFunction::constant(double value) { return CircleFunction({cplx{value, 0.0}}); }

CircleFunction CircleFunction::from_cos_sin(double a0, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<cplx> c(n + 1);
  c[0] = a0;
  // a cos + b sin = Re((a - i b) e^{i n theta}) -> c_n = (a - i b)/2.
  for (std::size_t k = 0; k < n; ++k) {
    const double ak = k < a.size() ? a[k] : 0.0;
    const double bk = k < b.size() ? b[k] : 0.0;
    c[k + 1] = cplx{ak, -bk} / 2.0;
  }
  return CircleFunction(std::move(c));
}

CircleFunction CircleFunction::from_samples(std::span<const double> samples, int degree) {
  const std::size_t m = samples.size();
  if (degree < 0 || m <= 2 * static_cast<std::size_t>(degree)) {
    throw UsageError("need more than 2N samples for a degree-N transform");
  }
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * peak;
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (int n = 0; n <= degree; ++n) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      // Reduce n j mod m before scaling to keep the angle accurate.
      const std::size_t idx = (static_cast<std::size_t>(n) * j) % m;
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(m);
      acc += samples[j] * cplx{std::cos(ang), std::sin(ang)};
    }
    acc /= static_cast<double>(m);
    if (std::abs(acc.real()) < floor) acc.real(0.0);
    if (std::abs(acc.imag()) < floor) acc.imag(0.0);
    c[static_cast<std::size_t>(n)] = acc;
  }
  return CircleFunction(std::move(c));
}

CircleFunction CircleFunction::from_function(const std::function<double(double)>& f, int degree, int samples) {
  std::vector<double> s(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) s[static_cast<std::size_t>(j)] = f(2.0 * std::numbers::pi * j / samples);
  return from_samples(s, degree);
}

cplx CircleFunction::coefficient(int n) const {
  const int k = std::abs(n);
  if (k > degree()) return {0.0, 0.0};
  return n >= 0 ? c_[static_cast<std::size_t>(k)] : std::conj(c_[static_cast<std::size_t>(k)]);
}

double CircleFunction::operator()(double theta) const {
  double out = c_[0].real();
  for (int n = 1; n <= degree(); ++n) {
    out += 2.0 * (c_[static_cast<std::size_t>(n)] * cplx{std::cos(n * theta), std::sin(n * theta)}).real();
  }
  return out;
}

CircleFunction CircleFunction::rotated(double phi) const {
  std::vector<cplx> c(c_);
  for (int n = 1; n <= degree(); ++n) c[static_cast<std::size_t>(n)] *= cplx{std::cos(n * phi), std::sin(n * phi)};
  return CircleFunction(std::move(c));
}

CircleFunction CircleFunction::scaled(double k) const {
  std::vector<cplx> c(c_);
  for (auto& x : c) x *= k;
  return CircleFunction(std::move(c));
}

CircleFunction CircleFunction::plus_constant(double k) const {
  std::vector<cplx> c(c_);
  c[0] += k;
  return CircleFunction(std::move(c));
}

double CircleFunction::parseval_norm2() const {
  double s = std::norm(c_[0]);
  for (int n = 1; n <= degree(); ++n) s += 2.0 * std::norm(c_[static_cast<std::size_t>(n)]);
  return s;
}

std::vector<cplx> CircleFunction::derivative_coefficients() const {
  std::vector<cplx> a(static_cast<std::size_t>(std::max(degree(), 1)), cplx{0.0, 0.0});
  for (int m = 0; m + 1 <= degree(); ++m) a[static_cast<std::size_t>(m)] = 2.0 * (m + 1.0) * c_[static_cast<std::size_t>(m + 1)];
  return a;
}

double poisson_extend(const CircleFunction& f, cplx z) {
  require_inside(z);
  std::vector<cplx> big(f.coefficients().begin(), f.coefficients().end());
  for (std::size_t n = 1; n < big.size(); ++n) big[n] *= 2.0;
  return horner(big, z).real();
}

std::array<double, 2> grad_poisson(const CircleFunction& f, cplx z) {
  require_inside(z);
  const cplx d = horner(f.derivative_coefficients(), z);
  return {d.real(), -d.imag()};
}

double grad_norm2(std::span<const cplx> deriv, cplx z) { return std::norm(horner(deriv, z)); }

}  // namespace wsq::circle
