#pragma once

#include <optional>

#include "ehencky/tensor2.hpp"

namespace ehencky {

/// Elastic moduli and the dimensionless exponents of the exponentiated Hencky energy.
///
/// mu and kappa carry stress units; k weights the isochoric (shear) exponent and k_hat the
/// volumetric one. When constructed from the first Lame constant, kappa = (2 mu + 3 lambda) / 3.
class MaterialParams {
 public:
  /// Throws InvalidParams unless every argument is finite and strictly positive.
  MaterialParams(double mu, double kappa, double k, double k_hat);

  /// kappa derived from the Lame constant; throws InvalidParams if it is not positive.
  static MaterialParams from_lame(double mu, double lame_lambda, double k, double k_hat);

  /// Defaults sit exactly at the polyconvexity threshold: mu = kappa = 1, k = 1/4, k_hat = 1/8.
  static MaterialParams defaults() { return {1.0, 1.0, 0.25, 0.125}; }

  double mu() const noexcept { return mu_; }
  double kappa() const noexcept { return kappa_; }
  double k() const noexcept { return k_; }
  double k_hat() const noexcept { return k_hat_; }
  std::optional<double> lame_lambda() const noexcept { return lame_lambda_; }

  /// Energy at F = 1: mu/k + kappa/(2 k_hat).
  double rest_energy() const noexcept { return mu_ / k_ + kappa_ / (2.0 * k_hat_); }

 private:
  double mu_;
  double kappa_;
  double k_;
  double k_hat_;
  std::optional<double> lame_lambda_;
};

enum class EnergyStatus {
  finite,
  /// det F <= 0 (or below the 1e-300 near-singular guard).
  not_admissible,
  /// An exponent exceeded the overflow cap; the state is absurdly far from the identity.
  overflow,
};

/// Stored energy with its volumetric/isochoric split. Non-finite states carry value = +inf.
struct EnergyValue {
  double value = 0.0;
  double iso_part = 0.0;
  double vol_part = 0.0;
  EnergyStatus status = EnergyStatus::finite;

  bool is_finite() const noexcept { return status == EnergyStatus::finite; }
};

/// Largest exponent argument evaluated before the energy saturates to +inf.
inline constexpr double kExponentCap = 700.0;
/// Determinants below this are treated as inadmissible.
inline constexpr double kDetFloor = 1e-300;

/// ||dev2 log U||^2 = 1/2 log^2(lambda1/lambda2). Throws NonInvertible when det F <= 0.
double iso_invariant(const Mat2& f);

/// W(F) = (mu/k) exp(k ||dev2 log U||^2) + (kappa/(2 k_hat)) exp(k_hat (log det F)^2), +inf for det F <= 0.
EnergyValue energy(const MaterialParams& p, const Mat2& f) noexcept;

/// Convenience: energy(p, f).value.
double energy_value(const MaterialParams& p, const Mat2& f) noexcept;

/// First Piola-Kirchhoff stress dW/dF.
///
/// Evaluated spectrally as F^{-T} [2 mu e^{k ||dev2 log U||^2} dev2 log U + kappa e^{k_hat (tr log U)^2} tr(log U) 1].
/// Throws NonInvertible when det F <= 0; an overflowing exponent yields non-finite entries.
Mat2 pk1_stress(const MaterialParams& p, const Mat2& f);

/// Max componentwise |central difference of W - S1| / (1 + max|S1|).
///
/// If a perturbed matrix leaves det > 0 the step is reduced tenfold once; a second failure throws
/// NonInvertible.
double stress_consistency(const MaterialParams& p, const Mat2& f, double h);

}  // namespace ehencky
