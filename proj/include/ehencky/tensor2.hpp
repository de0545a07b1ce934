#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace ehencky {

/// Real 2x2 matrix, row-major: [[a11, a12], [a21, a22]].
struct Mat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  static constexpr Mat2 identity() noexcept { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(double d1, double d2) noexcept { return {d1, 0.0, 0.0, d2}; }
  static Mat2 rotation(double angle) noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c, -s, s, c};
  }
  /// Rank-one matrix a (x) b, i.e. a * b^T.
  static constexpr Mat2 outer(std::array<double, 2> a, std::array<double, 2> b) noexcept {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
  }

  constexpr std::array<double, 4> entries() const noexcept { return {a11, a12, a21, a22}; }
  static constexpr Mat2 from_entries(const std::array<double, 4>& e) noexcept {
    return {e[0], e[1], e[2], e[3]};
  }

  constexpr double operator()(int i, int j) const noexcept {
    return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22);
  }

  constexpr double det() const noexcept { return a11 * a22 - a12 * a21; }
  constexpr double trace() const noexcept { return a11 + a22; }
  constexpr Mat2 transpose() const noexcept { return {a11, a21, a12, a22}; }
  /// Frobenius norm.
  double norm() const noexcept { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }
  double max_abs() const noexcept;
  bool is_finite() const noexcept;

  constexpr Mat2& operator+=(const Mat2& o) noexcept {
    a11 += o.a11;
    a12 += o.a12;
    a21 += o.a21;
    a22 += o.a22;
    return *this;
  }
  constexpr Mat2& operator-=(const Mat2& o) noexcept {
    a11 -= o.a11;
    a12 -= o.a12;
    a21 -= o.a21;
    a22 -= o.a22;
    return *this;
  }
  constexpr Mat2& operator*=(double s) noexcept {
    a11 *= s;
    a12 *= s;
    a21 *= s;
    a22 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Mat2 operator+(Mat2 a, const Mat2& b) noexcept { return a += b; }
constexpr Mat2 operator-(Mat2 a, const Mat2& b) noexcept { return a -= b; }
constexpr Mat2 operator*(Mat2 a, double s) noexcept { return a *= s; }
constexpr Mat2 operator*(double s, Mat2 a) noexcept { return a *= s; }
constexpr Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
constexpr std::array<double, 2> operator*(const Mat2& a, const std::array<double, 2>& v) noexcept {
  return {a.a11 * v[0] + a.a12 * v[1], a.a21 * v[0] + a.a22 * v[1]};
}

/// Frobenius inner product <A, B> = tr(A^T B).
constexpr double inner(const Mat2& a, const Mat2& b) noexcept {
  return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}

/// Inverse; throws NonInvertible when det == 0.
Mat2 inverse(const Mat2& m);

/// Ordered singular values with orthogonal factors: F = left_rot * diag(lambda1, lambda2) * right_rot.
///
/// right_rot is always a proper rotation. left_rot is a rotation when det F >= 0 and a
/// reflection otherwise, so lambda2 stays nonnegative.
struct SpectralData {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  Mat2 left_rot = Mat2::identity();
  Mat2 right_rot = Mat2::identity();

  Mat2 reconstruct() const noexcept { return left_rot * Mat2::diag(lambda1, lambda2) * right_rot; }
};

/// Closed-form singular value decomposition of a 2x2 matrix.
///
/// Uses the rotation/reflection split M = [E+F, G-H; G+H, E-F], so lambda1 = hypot(E,H) + hypot(F,G)
/// exactly and lambda2 = |det M| / lambda1. No iteration, no sign ambiguity; when the singular
/// values coincide both factors degenerate to the identity-angle convention.
SpectralData svd2(const Mat2& f) noexcept;

/// Singular values only, (lambda1, lambda2) with lambda1 >= lambda2 >= 0.
std::pair<double, double> singular_values(const Mat2& f) noexcept;

/// Largest singular value (spectral norm).
double lambda_max(const Mat2& f) noexcept;

struct PolarDecomposition {
  Mat2 rotation;
  Mat2 stretch;
};

/// Right polar decomposition F = R U with R in SO(2), U = sqrt(F^T F).
/// Throws NonInvertible when det F <= 0.
PolarDecomposition polar_right(const Mat2& f);

/// Symmetric eigen-decomposition S = V diag(e1, e2) V^T, e1 >= e2, V a rotation.
struct SymmetricEigen {
  double e1 = 0.0;
  double e2 = 0.0;
  Mat2 vectors = Mat2::identity();
};

/// Closed-form eigen-decomposition of a symmetric matrix (the lower-left entry is ignored).
SymmetricEigen eig_sym(const Mat2& s) noexcept;

/// Logarithm of a symmetric positive definite matrix.
/// Throws NotSPD for asymmetry above 1e-10 (absolute, on ||U - U^T||) or a nonpositive eigenvalue.
Mat2 log_spd(const Mat2& u);

/// Exponential of a symmetric matrix.
Mat2 exp_sym(const Mat2& x);

/// Deviatoric part X - tr(X)/2 * 1.
constexpr Mat2 dev2(const Mat2& x) noexcept {
  const double half_tr = 0.5 * (x.a11 + x.a22);
  return {x.a11 - half_tr, x.a12, x.a21, x.a22 - half_tr};
}

}  // namespace ehencky
