#pragma once

#include <array>

namespace wsq {

/// Symmetric 3x3 matrix stored by its upper triangle.
class SymMatrix3 {
public:
  SymMatrix3() = default;
  SymMatrix3(double a00, double a01, double a02, double a11, double a12, double a22)
      : e_{a00, a01, a02, a11, a12, a22} {}

  static SymMatrix3 diagonal(double a, double b, double c) { return {a, 0, 0, b, 0, c}; }

  double operator()(int i, int j) const;

  SymMatrix3 operator+(const SymMatrix3& o) const;
  SymMatrix3 operator-(const SymMatrix3& o) const;
  SymMatrix3 operator-() const;
  SymMatrix3 operator*(double k) const;

  /// u^T M u
  double quadratic_form(const std::array<double, 3>& u) const;
  double frobenius_norm() const;
  double trace() const { return e_[0] + e_[3] + e_[5]; }
  double determinant() const;

  /// Leading principal minors (1x1, 2x2, 3x3) for Sylvester-style diagnostics.
  std::array<double, 3> leading_minors() const;

  /// Eigenvalues in ascending order from the characteristic polynomial (trigonometric form).
  std::array<double, 3> eigenvalues() const;

  /// Eigenvalues in ascending order by cyclic Jacobi rotations; independent cross-check.
  std::array<double, 3> eigenvalues_jacobi(int max_sweeps = 50) const;

private:
  std::array<double, 6> e_{};
};

/// Symmetric 2x2 matrix [[a, b], [b, c]].
struct SymMatrix2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Ascending eigenvalues.
  std::array<double, 2> eigenvalues() const;
  double determinant() const { return a * c - b * b; }
  double norm() const;
};

/// Nonpositive-definite: largest eigenvalue <= tol (1 + ||m||).
bool check_npd(const SymMatrix3& m, double tol);
/// Nonnegative-definite: smallest eigenvalue >= -tol (1 + ||m||).
bool check_nnd(const SymMatrix3& m, double tol);
bool check_npd(const SymMatrix2& m, double tol);
bool check_nnd(const SymMatrix2& m, double tol);

}  // namespace wsq
