#include "ehencky/tensor2.hpp"

#include <algorithm>

#include "ehencky/errors.hpp"

namespace ehencky {

double Mat2::max_abs() const noexcept {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

bool Mat2::is_finite() const noexcept {
  return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

Mat2 inverse(const Mat2& m) {
  const double d = m.det();
  if (d == 0.0 || !std::isfinite(d)) {
    throw NonInvertible("inverse: singular matrix");
  }
  const double inv = 1.0 / d;
  return {m.a22 * inv, -m.a12 * inv, -m.a21 * inv, m.a11 * inv};
}

SpectralData svd2(const Mat2& f) noexcept {
  const double e = 0.5 * (f.a11 + f.a22);
  const double ff = 0.5 * (f.a11 - f.a22);
  const double g = 0.5 * (f.a21 + f.a12);
  const double h = 0.5 * (f.a21 - f.a12);
  const double q = std::hypot(e, h);
  const double r = std::hypot(ff, g);

  SpectralData out;
  out.lambda1 = q + r;
  const double det = f.det();
  // lambda1 * lambda2 = |det| holds exactly this way; q - r would cancel for near-singular input.
  out.lambda2 = out.lambda1 > 0.0 ? std::abs(det) / out.lambda1 : 0.0;
  if (out.lambda2 > out.lambda1) {
    out.lambda2 = out.lambda1;
  }

  const double a1 = std::atan2(g, ff);
  const double a2 = std::atan2(h, e);
  const double theta = 0.5 * (a2 - a1);
  const double phi = 0.5 * (a2 + a1);
  out.left_rot = Mat2::rotation(phi);
  out.right_rot = Mat2::rotation(theta);
  if (det < 0.0) {
    // Signed second singular value q - r is negative: absorb the sign into a reflection.
    out.left_rot.a12 = -out.left_rot.a12;
    out.left_rot.a22 = -out.left_rot.a22;
  }
  return out;
}

std::pair<double, double> singular_values(const Mat2& f) noexcept {
  const double q = std::hypot(0.5 * (f.a11 + f.a22), 0.5 * (f.a21 - f.a12));
  const double r = std::hypot(0.5 * (f.a11 - f.a22), 0.5 * (f.a21 + f.a12));
  const double l1 = q + r;
  double l2 = l1 > 0.0 ? std::abs(f.det()) / l1 : 0.0;
  return {l1, std::min(l1, l2)};
}

double lambda_max(const Mat2& f) noexcept { return singular_values(f).first; }

PolarDecomposition polar_right(const Mat2& f) {
  if (!(f.det() > 0.0)) {
    throw NonInvertible("polar_right: det F <= 0");
  }
  const SpectralData sd = svd2(f);
  const Mat2& v = sd.right_rot;
  PolarDecomposition out;
  out.rotation = sd.left_rot * v;
  out.stretch = v.transpose() * Mat2::diag(sd.lambda1, sd.lambda2) * v;
  // Exactly symmetric.
  const double off = 0.5 * (out.stretch.a12 + out.stretch.a21);
  out.stretch.a12 = off;
  out.stretch.a21 = off;
  return out;
}

SymmetricEigen eig_sym(const Mat2& s) noexcept {
  const double a = s.a11;
  const double b = s.a12;
  const double d = s.a22;
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double rad = std::hypot(half_diff, b);

  SymmetricEigen out;
  out.e1 = mean + rad;
  out.e2 = mean - rad;
  // The smaller-magnitude root comes from det / (larger root) to avoid cancellation.
  const double det = a * d - b * b;
  if (std::abs(mean) > rad) {
    if (mean > 0.0) {
      out.e2 = det / out.e1;
    } else {
      out.e1 = det / out.e2;
    }
  }
  if (rad == 0.0) {
    out.vectors = Mat2::identity();
  } else {
    // Principal eigenvector at angle 0.5 * atan2(2b, a - d).
    out.vectors = Mat2::rotation(0.5 * std::atan2(b, half_diff));
  }
  return out;
}

namespace {

Mat2 spectral_compose(const SymmetricEigen& eig, double f1, double f2) noexcept {
  const Mat2& v = eig.vectors;
  Mat2 out = v * Mat2::diag(f1, f2) * v.transpose();
  const double off = 0.5 * (out.a12 + out.a21);
  out.a12 = off;
  out.a21 = off;
  return out;
}

Mat2 symmetrized(const Mat2& x) noexcept {
  const double off = 0.5 * (x.a12 + x.a21);
  return {x.a11, off, off, x.a22};
}

}  // namespace

Mat2 log_spd(const Mat2& u) {
  if (!u.is_finite()) {
    throw NotSPD("log_spd: non-finite entries");
  }
  const double asym = std::abs(u.a12 - u.a21) * std::sqrt(2.0);
  if (asym > 1e-10) {
    throw NotSPD("log_spd: matrix is not symmetric");
  }
  const SymmetricEigen eig = eig_sym(symmetrized(u));
  if (!(eig.e2 > 0.0)) {
    throw NotSPD("log_spd: matrix is not positive definite");
  }
  return spectral_compose(eig, std::log(eig.e1), std::log(eig.e2));
}

Mat2 exp_sym(const Mat2& x) {
  const SymmetricEigen eig = eig_sym(symmetrized(x));
  return spectral_compose(eig, std::exp(eig.e1), std::exp(eig.e2));
}

}  // namespace ehencky
