#include "ehencky/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ehencky/errors.hpp"

namespace ehencky {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MaterialParams::MaterialParams(double mu, double kappa, double k, double k_hat)
    : mu_(mu), kappa_(kappa), k_(k), k_hat_(k_hat) {
  if (!positive_finite(mu) || !positive_finite(kappa) || !positive_finite(k) ||
      !positive_finite(k_hat)) {
    throw InvalidParams("material parameters mu, kappa, k, k_hat must be finite and > 0");
  }
}

MaterialParams MaterialParams::from_lame(double mu, double lame_lambda, double k, double k_hat) {
  MaterialParams p(mu, (2.0 * mu + 3.0 * lame_lambda) / 3.0, k, k_hat);
  p.lame_lambda_ = lame_lambda;
  return p;
}

double iso_invariant(const Mat2& f) {
  if (!(f.det() > 0.0)) {
    throw NonInvertible("iso_invariant: det F <= 0");
  }
  const auto [l1, l2] = singular_values(f);
  const double s = std::log(l1 / l2);
  return 0.5 * s * s;
}

EnergyValue energy(const MaterialParams& p, const Mat2& f) noexcept {
  EnergyValue out;
  const double det = f.det();
  if (!(det >= kDetFloor) || !f.is_finite()) {
    out.value = kInf;
    out.status = EnergyStatus::not_admissible;
    return out;
  }
  const auto [l1, l2] = singular_values(f);
  const double ratio_log = std::log(l1 / l2);
  const double log_det = std::log(det);
  const double iso_arg = p.k() * 0.5 * ratio_log * ratio_log;
  const double vol_arg = p.k_hat() * log_det * log_det;
  if (!(iso_arg <= kExponentCap) || !(vol_arg <= kExponentCap)) {
    out.value = kInf;
    out.status = EnergyStatus::overflow;
    return out;
  }
  out.iso_part = p.mu() / p.k() * std::exp(iso_arg);
  out.vol_part = p.kappa() / (2.0 * p.k_hat()) * std::exp(vol_arg);
  out.value = out.iso_part + out.vol_part;
  return out;
}

double energy_value(const MaterialParams& p, const Mat2& f) noexcept { return energy(p, f).value; }

Mat2 pk1_stress(const MaterialParams& p, const Mat2& f) {
  if (!(f.det() > 0.0)) {
    throw NonInvertible("pk1_stress: det F <= 0");
  }
  // F = L diag(l) V, U = V^T diag(l) V, so F^{-T} g(U) = L diag(g(l_i) / l_i) V.
  const SpectralData sd = svd2(f);
  const double log1 = std::log(sd.lambda1);
  const double log2 = std::log(sd.lambda2);
  const double dev = 0.5 * (log1 - log2);
  const double log_det = log1 + log2;
  const double iso_scale = 2.0 * p.mu() * std::exp(p.k() * 2.0 * dev * dev);
  const double vol_term = p.kappa() * std::exp(p.k_hat() * log_det * log_det) * log_det;
  const double t1 = iso_scale * dev + vol_term;
  const double t2 = -iso_scale * dev + vol_term;
  return sd.left_rot * Mat2::diag(t1 / sd.lambda1, t2 / sd.lambda2) * sd.right_rot;
}

double stress_consistency(const MaterialParams& p, const Mat2& f, double h) {
  const Mat2 s = pk1_stress(p, f);
  const double scale = 1.0 + s.max_abs();

  auto attempt = [&](double step, double& residual) {
    residual = 0.0;
    for (int idx = 0; idx < 4; ++idx) {
      auto plus = f.entries();
      auto minus = f.entries();
      plus[idx] += step;
      minus[idx] -= step;
      const EnergyValue wp = energy(p, Mat2::from_entries(plus));
      const EnergyValue wm = energy(p, Mat2::from_entries(minus));
      if (!wp.is_finite() || !wm.is_finite()) {
        return false;
      }
      const double fd = (wp.value - wm.value) / (2.0 * step);
      residual = std::max(residual, std::abs(fd - s.entries()[idx]) / scale);
    }
    return true;
  };

  double residual = 0.0;
  if (attempt(h, residual) || attempt(0.1 * h, residual)) {
    return residual;
  }
  throw NonInvertible("stress_consistency: perturbation leaves the det F > 0 region");
}

}  // namespace ehencky
