#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ehencky/constitutive.hpp"
#include "ehencky/sampling.hpp"
#include "ehencky/tensor2.hpp"

namespace ehencky {

// ---------------------------------------------------------------------------
// Scan reports
// ---------------------------------------------------------------------------

/// Named input of a scan witness; matrices are stored row-major.
struct WitnessEntry {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const WitnessEntry&, const WitnessEntry&) = default;
};

using Witness = std::vector<WitnessEntry>;

Witness::value_type witness_entry(std::string name, const Mat2& m);
Witness::value_type witness_entry(std::string name, double x);
/// Looks up a witness entry; throws std::out_of_range if absent.
const std::vector<double>& witness_values(const Witness& w, const std::string& name);
Mat2 witness_matrix(const Witness& w, const std::string& name);
double witness_scalar(const Witness& w, const std::string& name);

/// Outcome of a randomized or grid property scan. worst_margin >= -tolerance means the property held.
struct ScanReport {
  std::string suite;
  std::uint64_t samples = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  Witness witness;
  std::uint64_t seed = kDefaultSeed;

  bool passed() const noexcept { return worst_margin >= -tolerance; }

  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

/// A single evaluated sample.
struct SampleResult {
  double margin = 0.0;
  Witness witness;
};

/// Runs `n` samples, each on its own generator derived from (seed, index), and keeps the minimum.
/// Ties keep the earliest index, so the report does not depend on evaluation order.
template <typename SampleFn>
ScanReport run_scan(std::string suite, std::uint64_t n, std::uint64_t seed, double tolerance,
                    SampleFn&& sample) {
  ScanReport report;
  report.suite = std::move(suite);
  report.samples = n;
  report.seed = seed;
  report.tolerance = tolerance;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng = sample_rng(seed, i);
    SampleResult r = sample(rng);
    if (r.margin < report.worst_margin || report.witness.empty()) {
      report.worst_margin = r.margin;
      report.witness = std::move(r.witness);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Scalar threshold Y(theta) = exp((k/2) log^2 theta)
// ---------------------------------------------------------------------------

/// Y(theta); throws DomainError for theta < 1.
double y_value(double k, double theta);

/// Analytic Y''(theta) = e^{(k/2) s^2} (k^2 s^2 - k s + k) / theta^2, s = log theta.
double y_second_derivative(double k, double theta);

/// k s^2 - s + 1, whose sign is the sign of Y'' (evaluated in completed-square form).
double y_convexity_factor(double k, double s);

/// Points of a Y curve on a log-spaced grid over [1, theta_max].
struct ScalarCurve {
  double k = 0.25;
  std::vector<double> grid;
  std::vector<double> values;
};

/// Throws DomainError unless theta_max > 1 and n_points >= 2.
ScalarCurve make_y_curve(double k, double theta_max, std::size_t n_points);

/// CSV with header `theta,y`.
std::string curve_to_csv(const ScalarCurve& curve);

struct NegativeCurvature {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  /// Grid point with the most negative divided difference (relative to Y / theta^2).
  double theta_worst = 0.0;
};

/// Hull of the interior grid points whose non-uniform second divided difference is negative
/// beyond round-off, or nullopt when the sampled curve is convex.
std::optional<NegativeCurvature> negative_curvature_interval(const ScalarCurve& curve);

// ---------------------------------------------------------------------------
// Volumetric exponent t -> exp(k_hat |log t|^m)
// ---------------------------------------------------------------------------

/// Analytic second derivative of t -> exp(k_hat |log t|^m), m in {2, 3}.
/// Throws UnsupportedExponent for other m and DomainError for t <= 0.
double vol_convexity_margin(int m, double k_hat, double t);

/// Positive multiple of vol_convexity_margin as a function of s = log t; for m = 2 it is
/// 2 k_hat s^2 - s + 1, for m = 3 (s > 0) 3 k_hat s^3 - s + 2.
double vol_convexity_factor(int m, double k_hat, double s);

/// Convexity threshold 1 / m^(m+1).
double vol_convexity_threshold(int m);

/// Grid check of vol_convexity_factor on s in [s_lo, s_hi], refined around the analytic minimiser
/// of the factor (where a violation first appears). Margin is the factor value.
ScanReport volumetric_scan(int m, double k_hat, double s_lo, double s_hi, std::size_t n_grid,
                           double tolerance = 1e-12);

/// Same for the Y factor k s^2 - s + 1 on s in [s_lo, s_hi].
ScanReport scalar_threshold_scan(double k, double s_lo, double s_hi, std::size_t n_grid,
                                 double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Polyconvexity witness
// ---------------------------------------------------------------------------

/// Z(F) = lambda_max^2 / det F; throws NonInvertible when det F <= 0.
double z_value(const Mat2& f);

/// Hessian of f(a, b) = a^p / b^q.
Mat2 f_pq_hessian(double p, double q, double a, double b);

/// Smaller eigenvalue of the Hessian of a^p / b^q at (a, b).
double f_pq_hessian_psd(double p, double q, double a, double b);

/// P(F, delta) = (mu/k) Y(lambda_max^2 / delta) + (kappa / (2 k_hat)) exp(k_hat log^2 delta).
/// Throws DomainError unless delta > 0 and lambda_max(F)^2 >= delta.
double polyconvex_witness(const MaterialParams& pms, const Mat2& f, double delta);

/// P with Y extended by the constant 1 below theta = 1. The extension stays convex and
/// nondecreasing, so P is defined (and jointly convex for k >= 1/4, k_hat >= 1/8) for every
/// F and delta > 0.
double polyconvex_witness_extended(const MaterialParams& pms, const Mat2& f, double delta);

/// Midpoint convexity of the extended witness on random pairs (F_i, delta_i).
/// margin = ((P1 + P2)/2 - P(mid)) / (1 + |P(mid)|).
ScanReport polyconvex_midpoint_scan(const MaterialParams& pms, std::uint64_t n, std::uint64_t seed,
                                    double tolerance = 1e-10);

/// margin = -|P(F, det F) - W(F)| / W(F) on random F.
ScanReport witness_identity_scan(const MaterialParams& pms, std::uint64_t n, std::uint64_t seed,
                                 double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Rank-one convexity and coercivity
// ---------------------------------------------------------------------------

/// Step of the rank-one second difference.
inline constexpr double kRankOneStep = 1e-4;

/// [W(F + h xi eta^T) - 2 W(F) + W(F - h xi eta^T)] / (h^2 W(F)); nullopt if F +- h xi eta^T leaves
/// GL+(2).
std::optional<double> rank_one_margin(const MaterialParams& pms, const Mat2& f,
                                      const std::array<double, 2>& xi,
                                      const std::array<double, 2>& eta, double h = kRankOneStep);

ScanReport rank_one_scan(const MaterialParams& pms, std::uint64_t n_samples, std::uint64_t seed,
                         double tolerance = 1e-6);

/// Ratios W(F_t)/||F_t||^q along the volumetric ray diag(t, t) and the isochoric ray diag(t, 1/t).
struct CoercivityProbe {
  double q = 1.0;
  std::vector<double> t_grid;
  std::vector<double> volumetric;
  std::vector<double> isochoric;
};

/// Throws DomainError unless q >= 1 and t_grid is strictly increasing with t > 1.
CoercivityProbe coercivity_probe(const MaterialParams& pms, double q, const std::vector<double>& t_grid);

bool strictly_increasing(const std::vector<double>& xs);

/// Every step among the last `tail` points increases (requires at least tail points).
bool eventually_increasing(const std::vector<double>& xs, std::size_t tail = 3);

/// Grid of `n` points t = e^L, L evenly spaced from log 10 up to where the larger exponent of W
/// reaches `exponent_budget`.
std::vector<double> coercivity_grid(const MaterialParams& pms, std::size_t n = 12,
                                    double exponent_budget = 600.0);

/// Eventual growth on both rays for each q. margin = min over rays and q of the smallest tail
/// increment of log ratio.
ScanReport coercivity_scan(const MaterialParams& pms, const std::vector<double>& qs,
                           const std::vector<double>& t_grid);

// ---------------------------------------------------------------------------
// Singular-value lemmas
// ---------------------------------------------------------------------------

/// <alpha, beta> - |tr(A B)| with alpha, beta the ordered singular values.
double von_neumann_check(const Mat2& a, const Mat2& b);

ScanReport von_neumann_scan(std::uint64_t n, std::uint64_t seed, double tolerance = 1e-12);

/// The orthogonal pair (Q, R) maximising tr(A Q B R): Q = R1^T Q2^T, R = R2^T Q1^T
/// with A = Q1 diag(alpha) R1, B = Q2 diag(beta) R2.
std::pair<Mat2, Mat2> von_neumann_optimizer(const Mat2& a, const Mat2& b);

struct VonNeumannMax {
  /// Max of |tr(A Q B R)| over samples and the constructed optimizer.
  double sup_found = 0.0;
  /// <alpha, beta>.
  double analytic = 0.0;
  /// |tr(A Q B R)| at the constructed optimizer.
  double constructed = 0.0;
  /// Largest value over random O(2) samples alone.
  double best_sample = 0.0;
};

/// Samples n_orth_samples pairs (Q, R) from both components of O(2).
VonNeumannMax von_neumann_max_check(const Mat2& a, const Mat2& b, std::uint64_t n_orth_samples,
                                    std::uint64_t seed = kDefaultSeed);

/// (1 - t) lambda_max(F1) + t lambda_max(F2) - lambda_max((1 - t) F1 + t F2).
double lambda_max_convexity_check(const Mat2& f1, const Mat2& f2, double t);

/// Same for <r, lambda(F)>; throws InvalidWeights unless r1 >= r2 >= 0.
double lambda_max_convexity_check(const Mat2& f1, const Mat2& f2, double t,
                                  const std::array<double, 2>& r);

/// Random triples (F1, F2, t); with `weighted` a random ordered r is drawn per sample.
/// Margins normalized by 1 + |value at the combination|.
ScanReport lambda_max_scan(std::uint64_t n, std::uint64_t seed, bool weighted,
                           double tolerance = 1e-12);

/// Largest |tr(A Q B R)| - <alpha, beta> over random (A, B, Q, R), reported as margin
/// (<alpha,beta> - sample) / (1 + <alpha,beta>), together with attainment by the optimizer.
ScanReport von_neumann_max_scan(std::uint64_t n_pairs, std::uint64_t n_orth_samples,
                                std::uint64_t seed, double tolerance = 1e-10);

}  // namespace ehencky
