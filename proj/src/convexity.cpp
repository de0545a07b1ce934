#include "ehencky/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ehencky/errors.hpp"

namespace ehencky {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Uniform grid on [lo, hi] plus a dense patch of half-width `patch` around `centre`, sorted.
std::vector<double> refined_grid(double lo, double hi, std::size_t n, double centre, double patch) {
  std::vector<double> s;
  s.reserve(n + 401);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  if (std::isfinite(centre) && centre >= lo && centre <= hi) {
    for (int j = -200; j <= 200; ++j) {
      const double x = centre + patch * j / 200.0;
      if (x >= lo && x <= hi) {
        s.push_back(x);
      }
    }
  }
  std::sort(s.begin(), s.end());
  return s;
}

ScanReport factor_scan(std::string suite, const std::vector<double>& grid, double tolerance,
                       Witness params, auto&& factor) {
  ScanReport report;
  report.suite = std::move(suite);
  report.samples = grid.size();
  report.tolerance = tolerance;
  double worst_s = 0.0;
  for (double s : grid) {
    const double v = factor(s);
    if (v < report.worst_margin) {
      report.worst_margin = v;
      worst_s = s;
    }
  }
  report.witness = std::move(params);
  report.witness.push_back(witness_entry("s", worst_s));
  return report;
}

}  // namespace

Witness::value_type witness_entry(std::string name, const Mat2& m) {
  const auto e = m.entries();
  return {std::move(name), std::vector<double>(e.begin(), e.end())};
}

Witness::value_type witness_entry(std::string name, double x) { return {std::move(name), {x}}; }

const std::vector<double>& witness_values(const Witness& w, const std::string& name) {
  for (const auto& entry : w) {
    if (entry.name == name) {
      return entry.values;
    }
  }
  throw std::out_of_range("witness has no entry '" + name + "'");
}

Mat2 witness_matrix(const Witness& w, const std::string& name) {
  const auto& v = witness_values(w, name);
  if (v.size() != 4) {
    throw std::out_of_range("witness entry '" + name + "' is not a matrix");
  }
  return {v[0], v[1], v[2], v[3]};
}

double witness_scalar(const Witness& w, const std::string& name) { return witness_values(w, name).at(0); }

// --- Y ---------------------------------------------------------------------

double y_value(double k, double theta) {
  if (!(theta >= 1.0)) {
    throw DomainError("y_value: theta must be >= 1");
  }
  const double s = std::log(theta);
  return std::exp(0.5 * k * s * s);
}

double y_second_derivative(double k, double theta) {
  const double s = std::log(theta);
  return std::exp(0.5 * k * s * s) * k * y_convexity_factor(k, s) / (theta * theta);
}

double y_convexity_factor(double k, double s) {
  // k (s - 1/(2k))^2 + 1 - 1/(4k): exact zero at the double root when k = 1/4.
  const double c = 1.0 / (2.0 * k);
  return k * (s - c) * (s - c) + (1.0 - 1.0 / (4.0 * k));
}

ScalarCurve make_y_curve(double k, double theta_max, std::size_t n_points) {
  if (!(theta_max > 1.0) || !std::isfinite(theta_max) || n_points < 2) {
    throw DomainError("make_y_curve: need theta_max > 1 and n_points >= 2");
  }
  ScalarCurve curve;
  curve.k = k;
  curve.grid.reserve(n_points);
  curve.values.reserve(n_points);
  const double log_max = std::log(theta_max);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double theta =
        i + 1 == n_points ? theta_max
                          : std::exp(log_max * static_cast<double>(i) / static_cast<double>(n_points - 1));
    curve.grid.push_back(theta);
    curve.values.push_back(y_value(k, theta));
  }
  return curve;
}

std::string curve_to_csv(const ScalarCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "theta,y\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << curve.grid[i] << ',' << curve.values[i] << '\n';
  }
  return out.str();
}

std::optional<NegativeCurvature> negative_curvature_interval(const ScalarCurve& curve) {
  std::optional<NegativeCurvature> out;
  double worst = 0.0;
  const auto& x = curve.grid;
  const auto& y = curve.values;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    const double dd = 2.0 * ((y[i + 1] - y[i]) / h2 - (y[i] - y[i - 1]) / h1) / (h1 + h2);
    const double roundoff = 64.0 * kEps * y[i + 1] * (1.0 / h1 + 1.0 / h2) / (h1 + h2);
    if (dd < -roundoff) {
      if (!out) {
        out = NegativeCurvature{x[i], x[i], x[i]};
      }
      out->theta_hi = x[i];
      const double rel = dd * x[i] * x[i] / y[i];
      if (rel < worst) {
        worst = rel;
        out->theta_worst = x[i];
      }
    }
  }
  return out;
}

// --- volumetric ----------------------------------------------------------------

double vol_convexity_threshold(int m) {
  if (m != 2 && m != 3) {
    throw UnsupportedExponent("volumetric exponent m must be 2 or 3");
  }
  return 1.0 / std::pow(static_cast<double>(m), m + 1);
}

double vol_convexity_factor(int m, double k_hat, double s) {
  if (m == 2) {
    // 2 k_hat (s - s*)^2 + 1 - 1/(8 k_hat), s* = 1/(4 k_hat).
    const double c = 1.0 / (4.0 * k_hat);
    return 2.0 * k_hat * (s - c) * (s - c) + (1.0 - 1.0 / (8.0 * k_hat));
  }
  if (m == 3) {
    if (s <= 0.0) {
      // 3 k_hat s^4 + s^2 + 2|s|: every term nonnegative.
      return 3.0 * k_hat * s * s * s * s + s * s - 2.0 * s;
    }
    // 3 k_hat s^3 - s + 2 expanded about its minimiser s* = 1/(3 sqrt(k_hat)).
    const double c = 1.0 / (3.0 * std::sqrt(k_hat));
    return (2.0 - 2.0 * c / 3.0) + 3.0 * k_hat * (s - c) * (s - c) * (s + 2.0 * c);
  }
  throw UnsupportedExponent("volumetric exponent m must be 2 or 3");
}

double vol_convexity_margin(int m, double k_hat, double t) {
  if (m != 2 && m != 3) {
    throw UnsupportedExponent("volumetric exponent m must be 2 or 3");
  }
  if (!(t > 0.0)) {
    throw DomainError("vol_convexity_margin: t must be > 0");
  }
  const double s = std::log(t);
  const double abs_s = std::abs(s);
  const double value = std::exp(k_hat * std::pow(abs_s, m));
  // f'' = k_hat f / t^2 [k_hat phi'^2 + phi'' - phi'], phi = |s|^m.
  double scale = 0.0;
  double factor = vol_convexity_factor(m, k_hat, s);
  if (m == 2) {
    scale = 2.0;
  } else {
    scale = 3.0 * (s > 0.0 ? s : 1.0);
  }
  return k_hat * value * scale * factor / (t * t);
}

ScanReport volumetric_scan(int m, double k_hat, double s_lo, double s_hi, std::size_t n_grid,
                           double tolerance) {
  const double centre = m == 2 ? 1.0 / (4.0 * k_hat) : 1.0 / (3.0 * std::sqrt(k_hat));
  vol_convexity_threshold(m);
  const auto grid = refined_grid(s_lo, s_hi, n_grid, centre, 0.05);
  Witness params{witness_entry("m", static_cast<double>(m)), witness_entry("k_hat", k_hat)};
  return factor_scan("volumetric", grid, tolerance, std::move(params),
                     [&](double s) { return vol_convexity_factor(m, k_hat, s); });
}

ScanReport scalar_threshold_scan(double k, double s_lo, double s_hi, std::size_t n_grid,
                                 double tolerance) {
  const auto grid = refined_grid(s_lo, s_hi, n_grid, 1.0 / (2.0 * k), 0.05);
  return factor_scan("scalar-threshold", grid, tolerance, {witness_entry("k", k)},
                     [&](double s) { return y_convexity_factor(k, s); });
}

// --- polyconvexity witness ---------------------------------------------------

double z_value(const Mat2& f) {
  const double det = f.det();
  if (!(det > 0.0)) {
    throw NonInvertible("z_value: det F <= 0");
  }
  const double l = lambda_max(f);
  return l * l / det;
}

Mat2 f_pq_hessian(double p, double q, double a, double b) {
  const double faa = p * (p - 1.0) * std::pow(a, p - 2.0) * std::pow(b, -q);
  const double fab = -p * q * std::pow(a, p - 1.0) * std::pow(b, -q - 1.0);
  const double fbb = q * (q + 1.0) * std::pow(a, p) * std::pow(b, -q - 2.0);
  return {faa, fab, fab, fbb};
}

double f_pq_hessian_psd(double p, double q, double a, double b) {
  return eig_sym(f_pq_hessian(p, q, a, b)).e2;
}

namespace {

double vol_term(const MaterialParams& pms, double delta) {
  const double l = std::log(delta);
  return pms.kappa() / (2.0 * pms.k_hat()) * std::exp(pms.k_hat() * l * l);
}

}  // namespace

double polyconvex_witness(const MaterialParams& pms, const Mat2& f, double delta) {
  if (!(delta > 0.0)) {
    throw DomainError("polyconvex_witness: delta must be > 0");
  }
  const double l = lambda_max(f);
  const double theta = l * l / delta;
  if (!(theta >= 1.0)) {
    throw DomainError("polyconvex_witness: lambda_max^2 < delta");
  }
  return pms.mu() / pms.k() * y_value(pms.k(), theta) + vol_term(pms, delta);
}

double polyconvex_witness_extended(const MaterialParams& pms, const Mat2& f, double delta) {
  if (!(delta > 0.0)) {
    throw DomainError("polyconvex_witness_extended: delta must be > 0");
  }
  const double l = lambda_max(f);
  const double theta = std::max(1.0, l * l / delta);
  return pms.mu() / pms.k() * y_value(pms.k(), theta) + vol_term(pms, delta);
}

namespace {

// delta on the graph (det F) half of the time, otherwise log-uniform in [det F / e, lambda_max^2].
double draw_delta(Rng& rng, const Mat2& f) {
  const double det = f.det();
  if (std::bernoulli_distribution(0.5)(rng)) {
    return det;
  }
  const double l = lambda_max(f);
  return std::exp(uniform(rng, std::log(det) - 1.0, 2.0 * std::log(l)));
}

}  // namespace

ScanReport polyconvex_midpoint_scan(const MaterialParams& pms, std::uint64_t n, std::uint64_t seed,
                                    double tolerance) {
  return run_scan("polyconvex-witness", n, seed, tolerance, [&](Rng& rng) {
    const Mat2 f1 = random_deformation(rng);
    const double d1 = draw_delta(rng, f1);
    const Mat2 f2 = random_deformation(rng);
    const double d2 = draw_delta(rng, f2);
    const Mat2 fm = 0.5 * (f1 + f2);
    const double dm = 0.5 * (d1 + d2);
    const double p1 = polyconvex_witness_extended(pms, f1, d1);
    const double p2 = polyconvex_witness_extended(pms, f2, d2);
    const double pm = polyconvex_witness_extended(pms, fm, dm);
    SampleResult r;
    r.margin = (0.5 * (p1 + p2) - pm) / (1.0 + std::abs(pm));
    r.witness = {witness_entry("F1", f1), witness_entry("delta1", d1), witness_entry("F2", f2),
                 witness_entry("delta2", d2)};
    return r;
  });
}

ScanReport witness_identity_scan(const MaterialParams& pms, std::uint64_t n, std::uint64_t seed,
                                 double tolerance) {
  return run_scan("witness-identity", n, seed, tolerance, [&](Rng& rng) {
    const Mat2 f = random_deformation(rng);
    const double w = energy_value(pms, f);
    SampleResult r;
    r.margin = -std::abs(polyconvex_witness(pms, f, f.det()) - w) / w;
    r.witness = {witness_entry("F", f)};
    return r;
  });
}

// --- rank-one ------------------------------------------------------------------

std::optional<double> rank_one_margin(const MaterialParams& pms, const Mat2& f,
                                      const std::array<double, 2>& xi,
                                      const std::array<double, 2>& eta, double h) {
  const Mat2 dir = Mat2::outer(xi, eta);
  const EnergyValue w0 = energy(pms, f);
  const EnergyValue wp = energy(pms, f + h * dir);
  const EnergyValue wm = energy(pms, f - h * dir);
  if (!w0.is_finite() || !wp.is_finite() || !wm.is_finite()) {
    return std::nullopt;
  }
  return (wp.value - 2.0 * w0.value + wm.value) / (h * h * w0.value);
}

ScanReport rank_one_scan(const MaterialParams& pms, std::uint64_t n_samples, std::uint64_t seed,
                         double tolerance) {
  return run_scan("rank-one", n_samples, seed, tolerance, [&](Rng& rng) {
    for (;;) {
      const Mat2 f = random_deformation(rng);
      const auto xi = random_unit_vector(rng);
      const auto eta = random_unit_vector(rng);
      if (const auto m = rank_one_margin(pms, f, xi, eta)) {
        SampleResult r;
        r.margin = *m;
        r.witness = {witness_entry("F", f), {"xi", {xi[0], xi[1]}}, {"eta", {eta[0], eta[1]}}};
        return r;
      }
    }
  });
}

// --- coercivity ----------------------------------------------------------------

CoercivityProbe coercivity_probe(const MaterialParams& pms, double q, const std::vector<double>& t_grid) {
  if (!(q >= 1.0)) {
    throw DomainError("coercivity_probe: q must be >= 1");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 1.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw DomainError("coercivity_probe: t_grid must be increasing with t > 1");
    }
  }
  CoercivityProbe out;
  out.q = q;
  out.t_grid = t_grid;
  auto ratio = [&](const Mat2& f) {
    const EnergyValue w = energy(pms, f);
    if (!w.is_finite()) {
      return std::numeric_limits<double>::infinity();
    }
    return std::exp(std::log(w.value) - q * std::log(f.norm()));
  };
  for (double t : t_grid) {
    out.volumetric.push_back(ratio(Mat2::diag(t, t)));
    out.isochoric.push_back(ratio(Mat2::diag(t, 1.0 / t)));
  }
  return out;
}

bool strictly_increasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      return false;
    }
  }
  return true;
}

bool eventually_increasing(const std::vector<double>& xs, std::size_t tail) {
  if (xs.size() < tail || tail < 2) {
    return false;
  }
  return strictly_increasing(std::vector<double>(xs.end() - static_cast<std::ptrdiff_t>(tail), xs.end()));
}

std::vector<double> coercivity_grid(const MaterialParams& pms, std::size_t n, double exponent_budget) {
  // Exponents on the rays: volumetric 4 k_hat L^2, isochoric 2 k L^2, L = log t.
  const double l_lo = std::log(10.0);
  const double l_max =
      std::min(std::sqrt(exponent_budget / (4.0 * pms.k_hat())), std::sqrt(exponent_budget / (2.0 * pms.k())));
  const double l_hi = std::max(l_max, l_lo + 1.0);
  std::vector<double> grid;
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(std::exp(l_lo + (l_hi - l_lo) * static_cast<double>(i) / static_cast<double>(n - 1)));
  }
  return grid;
}

ScanReport coercivity_scan(const MaterialParams& pms, const std::vector<double>& qs,
                           const std::vector<double>& t_grid) {
  ScanReport report;
  report.suite = "coercivity";
  report.tolerance = 0.0;
  constexpr std::size_t kTail = 3;
  for (double q : qs) {
    const CoercivityProbe probe = coercivity_probe(pms, q, t_grid);
    for (int ray = 0; ray < 2; ++ray) {
      const auto& ratios = ray == 0 ? probe.volumetric : probe.isochoric;
      report.samples += ratios.size();
      const std::size_t start = ratios.size() >= kTail ? ratios.size() - kTail + 1 : 1;
      for (std::size_t i = start; i < ratios.size(); ++i) {
        const double inc = std::log(ratios[i]) - std::log(ratios[i - 1]);
        const double margin = std::isnan(inc) ? -std::numeric_limits<double>::infinity() : inc;
        if (margin < report.worst_margin || report.witness.empty()) {
          report.worst_margin = margin;
          report.witness = {witness_entry("q", q), witness_entry("ray", static_cast<double>(ray)),
                            witness_entry("t", t_grid[i])};
        }
      }
    }
  }
  return report;
}

// --- singular-value lemmas -------------------------------------------------------

double von_neumann_check(const Mat2& a, const Mat2& b) {
  const auto [a1, a2] = singular_values(a);
  const auto [b1, b2] = singular_values(b);
  return a1 * b1 + a2 * b2 - std::abs((a * b).trace());
}

ScanReport von_neumann_scan(std::uint64_t n, std::uint64_t seed, double tolerance) {
  return run_scan("von-neumann", n, seed, tolerance, [](Rng& rng) {
    const Mat2 a = random_gaussian_matrix(rng);
    const Mat2 b = random_gaussian_matrix(rng);
    const auto [a1, a2] = singular_values(a);
    const auto [b1, b2] = singular_values(b);
    SampleResult r;
    r.margin = von_neumann_check(a, b) / (1.0 + a1 * b1 + a2 * b2);
    r.witness = {witness_entry("A", a), witness_entry("B", b)};
    return r;
  });
}

std::pair<Mat2, Mat2> von_neumann_optimizer(const Mat2& a, const Mat2& b) {
  const SpectralData sa = svd2(a);
  const SpectralData sb = svd2(b);
  const Mat2 q = sa.right_rot.transpose() * sb.left_rot.transpose();
  const Mat2 r = sb.right_rot.transpose() * sa.left_rot.transpose();
  return {q, r};
}

VonNeumannMax von_neumann_max_check(const Mat2& a, const Mat2& b, std::uint64_t n_orth_samples,
                                    std::uint64_t seed) {
  const auto [a1, a2] = singular_values(a);
  const auto [b1, b2] = singular_values(b);
  VonNeumannMax out;
  out.analytic = a1 * b1 + a2 * b2;
  const auto [q_opt, r_opt] = von_neumann_optimizer(a, b);
  out.constructed = std::abs((a * q_opt * b * r_opt).trace());
  for (std::uint64_t i = 0; i < n_orth_samples; ++i) {
    Rng rng = sample_rng(seed, i);
    const Mat2 q = random_orthogonal(rng);
    const Mat2 r = random_orthogonal(rng);
    out.best_sample = std::max(out.best_sample, std::abs((a * q * b * r).trace()));
  }
  out.sup_found = std::max(out.best_sample, out.constructed);
  return out;
}

ScanReport von_neumann_max_scan(std::uint64_t n_pairs, std::uint64_t n_orth_samples, std::uint64_t seed,
                                double tolerance) {
  return run_scan("von-neumann-max", n_pairs, seed, tolerance, [&](Rng& rng) {
    const Mat2 a = random_gaussian_matrix(rng);
    const Mat2 b = random_gaussian_matrix(rng);
    const std::uint64_t sub_seed = rng() >> 11;  // exactly representable as a double
    const VonNeumannMax vm = von_neumann_max_check(a, b, n_orth_samples, sub_seed);
    const double scale = 1.0 + vm.analytic;
    SampleResult r;
    r.margin = std::min((vm.analytic - vm.best_sample) / scale,
                        -std::abs(vm.constructed - vm.analytic) / scale);
    r.witness = {witness_entry("A", a), witness_entry("B", b),
                 witness_entry("orth_seed", static_cast<double>(sub_seed))};
    return r;
  });
}

double lambda_max_convexity_check(const Mat2& f1, const Mat2& f2, double t) {
  return lambda_max_convexity_check(f1, f2, t, {1.0, 0.0});
}

double lambda_max_convexity_check(const Mat2& f1, const Mat2& f2, double t, const std::array<double, 2>& r) {
  if (!(r[0] >= r[1]) || !(r[1] >= 0.0)) {
    throw InvalidWeights("weights must satisfy r1 >= r2 >= 0");
  }
  auto weighted = [&](const Mat2& f) {
    const auto [l1, l2] = singular_values(f);
    return r[0] * l1 + r[1] * l2;
  };
  return (1.0 - t) * weighted(f1) + t * weighted(f2) - weighted((1.0 - t) * f1 + t * f2);
}

ScanReport lambda_max_scan(std::uint64_t n, std::uint64_t seed, bool weighted, double tolerance) {
  return run_scan(weighted ? "lambda-weighted" : "lambda-max", n, seed, tolerance, [&](Rng& rng) {
    const Mat2 f1 = random_gaussian_matrix(rng);
    const Mat2 f2 = random_gaussian_matrix(rng);
    const double t = uniform(rng, 0.0, 1.0);
    std::array<double, 2> r{1.0, 0.0};
    if (weighted) {
      const double u = uniform(rng, 0.0, 1.0);
      const double v = uniform(rng, 0.0, 1.0);
      r = {std::max(u, v), std::min(u, v)};
    }
    const auto [l1, l2] = singular_values((1.0 - t) * f1 + t * f2);
    SampleResult res;
    res.margin = lambda_max_convexity_check(f1, f2, t, r) / (1.0 + r[0] * l1 + r[1] * l2);
    res.witness = {witness_entry("F1", f1), witness_entry("F2", f2), witness_entry("t", t),
                   {"r", {r[0], r[1]}}};
    return res;
  });
}

}  // namespace ehencky
