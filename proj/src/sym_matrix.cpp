#include "wsq/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wsq {

namespace {

constexpr int index_of(int i, int j) {
  if (i > j) std::swap(i, j);
  // (0,0)=0 (0,1)=1 (0,2)=2 (1,1)=3 (1,2)=4 (2,2)=5
  return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

}  // namespace

double SymMatrix3::operator()(int i, int j) const { return e_[static_cast<std::size_t>(index_of(i, j))]; }

SymMatrix3 SymMatrix3::operator+(const SymMatrix3& o) const {
  SymMatrix3 r;
  for (std::size_t k = 0; k < 6; ++k) r.e_[k] = e_[k] + o.e_[k];
  return r;
}

SymMatrix3 SymMatrix3::operator-(const SymMatrix3& o) const { return *this + (-o); }

SymMatrix3 SymMatrix3::operator-() const { return *this * -1.0; }

SymMatrix3 SymMatrix3::operator*(double k) const {
  SymMatrix3 r;
  for (std::size_t i = 0; i < 6; ++i) r.e_[i] = e_[i] * k;
  return r;
}

double SymMatrix3::quadratic_form(const std::array<double, 3>& u) const {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += u[static_cast<std::size_t>(i)] * (*this)(i, j) * u[static_cast<std::size_t>(j)];
  return acc;
}

double SymMatrix3::frobenius_norm() const {
  const auto& m = *this;
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += m(i, j) * m(i, j);
  return std::sqrt(acc);
}

double SymMatrix3::determinant() const {
  const auto& m = *this;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(1, 2)) -
         m(0, 1) * (m(0, 1) * m(2, 2) - m(1, 2) * m(0, 2)) +
         m(0, 2) * (m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2));
}

std::array<double, 3> SymMatrix3::leading_minors() const {
  const auto& m = *this;
  return {m(0, 0), m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1), determinant()};
}

std::array<double, 3> SymMatrix3::eigenvalues() const {
  const auto& m = *this;
  const double off = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  std::array<double, 3> ev{};
  if (off == 0.0) {
    ev = {m(0, 0), m(1, 1), m(2, 2)};
    std::sort(ev.begin(), ev.end());
    return ev;
  }
  const double q = trace() / 3.0;
  const double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                    (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * off;
  const double p = std::sqrt(p2 / 6.0);
  const SymMatrix3 shifted = (*this - diagonal(q, q, q)) * (1.0 / p);
  const double half_det = std::clamp(shifted.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(half_det) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  ev = {lo, 3.0 * q - hi - lo, hi};
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::array<double, 3> SymMatrix3::eigenvalues_jacobi(int max_sweeps) const {
  double a[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = (*this)(i, j);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::array<double, 2> SymMatrix2::eigenvalues() const {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean - radius, mean + radius};
}

double SymMatrix2::norm() const { return std::sqrt(a * a + 2.0 * b * b + c * c); }

bool check_npd(const SymMatrix3& m, double tol) {
  return m.eigenvalues()[2] <= tol * (1.0 + m.frobenius_norm());
}

bool check_nnd(const SymMatrix3& m, double tol) { return check_npd(-m, tol); }

bool check_npd(const SymMatrix2& m, double tol) { return m.eigenvalues()[1] <= tol * (1.0 + m.norm()); }

bool check_nnd(const SymMatrix2& m, double tol) { return check_npd(SymMatrix2{-m.a, -m.b, -m.c}, tol); }

}  // namespace wsq
