#pragma once

// Test-only reference computations. None of these call into the decompositions under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "ehencky/constitutive.hpp"
#include "ehencky/tensor2.hpp"

namespace oracle {

using ehencky::Mat2;

struct Eigen2 {
  double l1;
  double l2;
  // Unit eigenvectors (columns).
  double v1x, v1y, v2x, v2y;
};

// Eigenpairs of a symmetric [[a, b], [b, d]] by the textbook quadratic formula.
inline Eigen2 eig_symmetric(double a, double b, double d) {
  const double tr = a + d;
  const double disc = std::sqrt((a - d) * (a - d) + 4.0 * b * b);
  Eigen2 e{};
  e.l1 = 0.5 * (tr + disc);
  e.l2 = 0.5 * (tr - disc);
  if (std::abs(b) < 1e-300) {
    if (a >= d) {
      e.v1x = 1, e.v1y = 0, e.v2x = 0, e.v2y = 1;
    } else {
      e.v1x = 0, e.v1y = 1, e.v2x = 1, e.v2y = 0;
    }
    return e;
  }
  // (A - l I) v = 0  =>  v = (b, l - a).
  double x = b, y = e.l1 - a;
  double n = std::hypot(x, y);
  e.v1x = x / n, e.v1y = y / n;
  e.v2x = -e.v1y, e.v2y = e.v1x;
  return e;
}

// Singular values as square roots of the eigenvalues of F^T F.
inline std::pair<double, double> singular_values(const Mat2& f) {
  const Mat2 c = f.transpose() * f;
  const Eigen2 e = eig_symmetric(c.a11, c.a12, c.a22);
  return {std::sqrt(e.l1), std::sqrt(std::max(e.l2, 0.0))};
}

inline Mat2 from_eigen(const Eigen2& e, double f1, double f2) {
  return {f1 * e.v1x * e.v1x + f2 * e.v2x * e.v2x, f1 * e.v1x * e.v1y + f2 * e.v2x * e.v2y,
          f1 * e.v1x * e.v1y + f2 * e.v2x * e.v2y, f1 * e.v1y * e.v1y + f2 * e.v2y * e.v2y};
}

// U = sqrt(F^T F).
inline Mat2 right_stretch(const Mat2& f) {
  const Mat2 c = f.transpose() * f;
  const Eigen2 e = eig_symmetric(c.a11, c.a12, c.a22);
  return from_eigen(e, std::sqrt(e.l1), std::sqrt(e.l2));
}

inline Mat2 log_sym(const Mat2& u) {
  const Eigen2 e = eig_symmetric(u.a11, 0.5 * (u.a12 + u.a21), u.a22);
  return from_eigen(e, std::log(e.l1), std::log(e.l2));
}

// exp by scaling and squaring of a truncated Taylor series.
inline Mat2 expm(const Mat2& x) {
  int squarings = 0;
  double nrm = x.norm();
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++squarings;
  }
  const Mat2 y = x * std::ldexp(1.0, -squarings);
  Mat2 term = Mat2::identity();
  Mat2 sum = Mat2::identity();
  for (int n = 1; n < 30; ++n) {
    term = term * y * (1.0 / n);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) {
    sum = sum * sum;
  }
  return sum;
}

// ||dev2 log U||^2 by the matrix-logarithm route.
inline double iso_invariant_matrix_log(const Mat2& f) {
  const Mat2 l = log_sym(right_stretch(f));
  const double half_tr = 0.5 * l.trace();
  const Mat2 dev{l.a11 - half_tr, l.a12, l.a21, l.a22 - half_tr};
  return ehencky::inner(dev, dev);
}

// Energy from the singular-value function g(l1, l2) = exp(k/2 log^2(l1/l2)).
inline double energy_via_g(const ehencky::MaterialParams& p, const Mat2& f) {
  const auto [l1, l2] = oracle::singular_values(f);
  const double r = std::log(l1 / l2);
  const double ld = std::log(f.det());
  return p.mu() / p.k() * std::exp(0.5 * p.k() * r * r) + p.kappa() / (2.0 * p.k_hat()) * std::exp(p.k_hat() * ld * ld);
}

// Central finite-difference gradient of W.
inline Mat2 fd_gradient(const ehencky::MaterialParams& p, const Mat2& f, double h) {
  auto e = f.entries();
  std::array<double, 4> g{};
  for (int i = 0; i < 4; ++i) {
    auto plus = e;
    auto minus = e;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (energy_via_g(p, Mat2::from_entries(plus)) - energy_via_g(p, Mat2::from_entries(minus))) / (2.0 * h);
  }
  return Mat2::from_entries(g);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)}); }

inline double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

}  // namespace oracle
