#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ehencky/convexity.hpp"
#include "ehencky/errors.hpp"
#include "ehencky/report_io.hpp"
#include "oracles.hpp"

using namespace ehencky;

namespace {

const MaterialParams kDefault = MaterialParams::defaults();

double central_second_difference(auto&& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace

TEST_CASE("y_value") {
  CHECK(y_value(0.3, 1.0) == 1.0);
  CHECK(y_value(0.5, std::numbers::e) == doctest::Approx(1.2840254166877415).epsilon(1e-15));
  // Series of exp(1/4).
  double series = 0.0;
  double term = 1.0;
  for (int n = 1; n < 20; ++n) {
    series += term;
    term *= 0.25 / n;
  }
  CHECK(y_value(0.5, std::numbers::e) == doctest::Approx(series).epsilon(1e-15));
  CHECK(y_value(0.25, 2.0) < y_value(0.25, 3.0));
  CHECK_THROWS_AS(y_value(0.25, 0.99), DomainError);
}

TEST_CASE("y_second_derivative") {
  CHECK(std::abs(y_second_derivative(0.25, std::exp(2.0))) < 1e-16);
  CHECK(y_convexity_factor(0.25, 2.0) == 0.0);
  CHECK(y_second_derivative(0.2, std::exp(2.5)) < 0.0);
  CHECK(y_convexity_factor(0.2, 2.5) == doctest::Approx(-0.25).epsilon(1e-14));
  for (int i = 0; i <= 1000; ++i) {
    const double theta = std::exp(10.0 * i / 1000.0);
    CHECK(y_second_derivative(0.5, theta) > 0.0);
  }
  // Analytic form against central differences of Y, agreement 1e-6 relative.
  for (double k : {0.125, 0.2, 0.25, 0.5, 1.0}) {
    for (double s : {0.3, 1.0, 1.7, 3.0, 5.0}) {
      const double theta = std::exp(s);
      const double analytic = y_second_derivative(k, theta);
      const double fd = central_second_difference([&](double x) { return y_value(k, x); }, theta, 1e-4 * theta);
      const double scale = std::abs(analytic) + y_value(k, theta) / (theta * theta);
      CHECK(std::abs(fd - analytic) <= 1e-6 * scale);
      CHECK((analytic >= 0.0) == (k * s * s - s + 1.0 >= 0.0));
    }
  }
}

TEST_CASE("scalar threshold sharpness") {
  const ScanReport at = scalar_threshold_scan(0.25, 0.0, 10.0, 10000);
  CHECK(at.passed());
  const ScanReport below = scalar_threshold_scan(0.25 - 1e-3, 0.0, 10.0, 10000);
  CHECK_FALSE(below.passed());
  CHECK(witness_scalar(below.witness, "s") == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("vol_convexity_margin") {
  CHECK(std::abs(vol_convexity_margin(2, 0.125, std::exp(2.0))) < 1e-18);
  CHECK(vol_convexity_factor(2, 0.125, 2.0) == 0.0);
  CHECK(vol_convexity_margin(2, 0.1, std::exp(2.5)) < 0.0);
  CHECK_THROWS_AS(vol_convexity_margin(4, 0.1, 2.0), UnsupportedExponent);
  CHECK_THROWS_AS(vol_convexity_margin(1, 0.1, 2.0), UnsupportedExponent);
  CHECK_THROWS_AS(vol_convexity_margin(2, 0.1, 0.0), DomainError);
  CHECK(vol_convexity_threshold(2) == 0.125);
  CHECK(vol_convexity_threshold(3) == doctest::Approx(1.0 / 81.0));

  // Analytic second derivative against finite differences of exp(k_hat |log t|^m).
  for (int m : {2, 3}) {
    for (double k_hat : {0.01, 1.0 / 81.0, 0.1, 0.125, 0.5}) {
      for (double s : {-4.0, -1.5, -0.3, 0.4, 1.0, 2.5, 3.0, 4.5}) {
        const double t = std::exp(s);
        auto f = [&](double x) { return std::exp(k_hat * std::pow(std::abs(std::log(x)), m)); };
        const double fd = central_second_difference(f, t, 1e-4 * t);
        const double analytic = vol_convexity_margin(m, k_hat, t);
        CHECK(fd == doctest::Approx(analytic).epsilon(1e-5).scale(f(t) / (t * t)));
        CHECK((analytic >= 0.0) == (vol_convexity_factor(m, k_hat, s) >= 0.0));
      }
    }
  }

  // m = 3 with k_hat = 1/81 on s in [-5, 5].
  const ScanReport m3 = volumetric_scan(3, 1.0 / 81.0, -5.0, 5.0, 10001);
  CHECK(m3.passed());
  CHECK(vol_convexity_factor(3, 1.0 / 81.0, 3.0) == doctest::Approx(0.0).scale(1.0));
  const ScanReport m3v = volumetric_scan(3, 0.9 / 81.0, -5.0, 5.0, 10001);
  CHECK_FALSE(m3v.passed());
  CHECK(witness_scalar(m3v.witness, "s") == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("volumetric threshold sharpness (m = 2)") {
  CHECK(volumetric_scan(2, 0.125, -10.0, 10.0, 10001).passed());
  const ScanReport below = volumetric_scan(2, 0.125 - 1e-3, -10.0, 10.0, 10001);
  CHECK_FALSE(below.passed());
  // The violation sits around the minimiser s = 1/(4 k_hat) ~ 2.02.
  CHECK(witness_scalar(below.witness, "s") == doctest::Approx(1.0 / (4.0 * (0.125 - 1e-3))).epsilon(0.01));
  const ScanReport k01 = volumetric_scan(2, 0.1, -10.0, 10.0, 10001);
  CHECK_FALSE(k01.passed());
  CHECK(witness_scalar(k01.witness, "s") == doctest::Approx(2.5).epsilon(1e-3));
}

TEST_CASE("z_value") {
  CHECK(z_value(Mat2::identity()) == 1.0);
  CHECK(z_value(Mat2::diag(2.0, 0.5)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(z_value(Mat2::diag(1.0, -1.0)), NonInvertible);
  for (std::uint64_t i = 0; i < 20000; ++i) {
    Rng rng = sample_rng(31, i);
    const double c = std::exp(uniform(rng, -2.0, 2.0));
    REQUIRE(z_value(c * random_rotation(rng)) == doctest::Approx(1.0).epsilon(1e-13));
    const Mat2 f = random_deformation(rng);
    const auto [l1, l2] = oracle::singular_values(f);
    REQUIRE(z_value(f) >= 1.0);
    REQUIRE(z_value(f) == doctest::Approx(l1 / l2).epsilon(1e-10));
  }
}

TEST_CASE("f_pq_hessian_psd") {
  const Mat2 h = f_pq_hessian(2.0, 1.0, 2.0, 1.0);
  CHECK(h == Mat2{2.0, -4.0, -4.0, 8.0});
  CHECK(h.det() == 0.0);
  CHECK(std::abs(f_pq_hessian_psd(2.0, 1.0, 2.0, 1.0)) < 1e-14);
  CHECK(f_pq_hessian_psd(3.0, 2.0, 1.0, 1.0) >= 0.0);

  // Grid oracle over (a, b) in [0.1, 10]^2.
  double worst_21 = 0.0;
  double worst_2_15 = 0.0;
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      const double a = 0.1 * std::pow(100.0, i / 60.0);
      const double b = 0.1 * std::pow(100.0, j / 60.0);
      const Mat2 h21 = f_pq_hessian(2.0, 1.0, a, b);
      CHECK(std::abs(h21.det()) <= 1e-12 * h21.max_abs() * h21.max_abs());
      CHECK(h21.trace() > 0.0);
      worst_21 = std::min(worst_21, f_pq_hessian_psd(2.0, 1.0, a, b) / (1.0 + h21.max_abs()));
      worst_2_15 = std::min(worst_2_15, f_pq_hessian_psd(2.0, 1.5, a, b));
    }
  }
  CHECK(worst_21 > -1e-12);
  CHECK(worst_2_15 < 0.0);
}

TEST_CASE("polyconvex_witness") {
  CHECK(polyconvex_witness(kDefault, Mat2::identity(), 1.0) == kDefault.rest_energy());
  const Mat2 f = Mat2::diag(2.0, 0.5);
  CHECK(polyconvex_witness(kDefault, f, f.det()) == doctest::Approx(energy_value(kDefault, f)).epsilon(1e-14));
  CHECK_THROWS_AS(polyconvex_witness(kDefault, f, 0.0), DomainError);
  CHECK_THROWS_AS(polyconvex_witness(kDefault, f, 4.5), DomainError);
  // Below theta = 1 the extension contributes mu/k.
  const double l = std::log(4.5);
  CHECK(polyconvex_witness_extended(kDefault, f, 4.5) == doctest::Approx(4.0 + 4.0 * std::exp(l * l / 8.0)));

  const ScanReport id = witness_identity_scan(kDefault, 20000, 5);
  CHECK(id.passed());
  const ScanReport mid = polyconvex_midpoint_scan(kDefault, 20000, 5);
  CHECK(mid.passed());
  // Witness re-evaluates to the reported margin.
  const Mat2 f1 = witness_matrix(mid.witness, "F1");
  const Mat2 f2 = witness_matrix(mid.witness, "F2");
  const double d1 = witness_scalar(mid.witness, "delta1");
  const double d2 = witness_scalar(mid.witness, "delta2");
  const double pm = polyconvex_witness_extended(kDefault, 0.5 * (f1 + f2), 0.5 * (d1 + d2));
  const double margin = (0.5 * (polyconvex_witness_extended(kDefault, f1, d1) +
                                polyconvex_witness_extended(kDefault, f2, d2)) -
                         pm) /
                        (1.0 + std::abs(pm));
  CHECK(std::abs(margin - mid.worst_margin) <= 1e-12);
}

TEST_CASE("rank-one scan") {
  const ScanReport r = rank_one_scan(kDefault, 20000, 3);
  CHECK(r.passed());
  CHECK(r.samples == 20000);
  const Mat2 f = witness_matrix(r.witness, "F");
  const auto& xi = witness_values(r.witness, "xi");
  const auto& eta = witness_values(r.witness, "eta");
  const auto m = rank_one_margin(kDefault, f, {xi[0], xi[1]}, {eta[0], eta[1]});
  REQUIRE(m.has_value());
  CHECK(std::abs(*m - r.worst_margin) <= 1e-12);

  const MaterialParams stiff(1.0, 1.0, 5.0, 1.0);
  CHECK(rank_one_scan(stiff, 20000, 3).passed());

  // Deterministic replay.
  CHECK(rank_one_scan(kDefault, 5000, 99) == rank_one_scan(kDefault, 5000, 99));
  CHECK_FALSE(rank_one_scan(kDefault, 5000, 99) == rank_one_scan(kDefault, 5000, 100));

  CHECK_FALSE(rank_one_margin(kDefault, Mat2::diag(1.0, 1e-5), {0.0, 1.0}, {0.0, 1.0}).has_value());
}

TEST_CASE("coercivity_probe") {
  const auto vol = coercivity_probe(kDefault, 2.0, {10.0, 100.0});
  CHECK(vol.volumetric[1] > vol.volumetric[0]);
  const auto iso = coercivity_probe(kDefault, 10.0, coercivity_grid(kDefault));
  CHECK(eventually_increasing(iso.isochoric));
  CHECK(eventually_increasing(iso.volumetric));
  const auto one = coercivity_probe(kDefault, 1.0, {2.0});
  CHECK(std::isfinite(one.volumetric[0]));
  CHECK(one.volumetric[0] > 0.0);
  CHECK(one.isochoric[0] > 0.0);
  CHECK(one.volumetric[0] == doctest::Approx(energy_value(kDefault, Mat2::diag(2.0, 2.0)) / std::sqrt(8.0)));
  CHECK_THROWS_AS(coercivity_probe(kDefault, 0.5, {2.0}), DomainError);
  CHECK_THROWS_AS(coercivity_probe(kDefault, 1.0, {3.0, 2.0}), DomainError);
  CHECK_THROWS_AS(coercivity_probe(kDefault, 1.0, {1.0}), DomainError);
  CHECK(coercivity_scan(kDefault, {1.0, 2.0, 10.0}, coercivity_grid(kDefault)).passed());

  CHECK(strictly_increasing({1.0, 2.0, 3.0}));
  CHECK_FALSE(strictly_increasing({1.0, 1.0, 3.0}));
  CHECK(eventually_increasing({5.0, 1.0, 2.0, 3.0}));
  CHECK_FALSE(eventually_increasing({1.0, 2.0, 3.0, 2.5}));
}

TEST_CASE("von Neumann trace inequality") {
  CHECK(von_neumann_check(Mat2::diag(2.0, 1.0), Mat2::diag(3.0, 1.0)) == 0.0);
  const Mat2 b = Mat2::rotation(std::numbers::pi / 2) * Mat2::diag(3.0, 1.0);
  CHECK(von_neumann_check(Mat2::diag(2.0, 1.0), b) > 0.0);
  const ScanReport r = von_neumann_scan(20000, 8);
  CHECK(r.passed());
  CHECK(r.worst_margin >= -1e-12);
}

TEST_CASE("von Neumann maximum over O(2)") {
  SUBCASE("diagonal matrices") {
    const auto vm = von_neumann_max_check(Mat2::diag(2.0, 1.0), Mat2::diag(3.0, 0.5), 10);
    CHECK(vm.constructed == doctest::Approx(6.5).epsilon(1e-15));
    CHECK(vm.analytic == doctest::Approx(6.5).epsilon(1e-15));
  }
  SUBCASE("random matrices, including reflections") {
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng = sample_rng(41, i);
      const Mat2 a = random_gaussian_matrix(rng);
      const Mat2 b = random_gaussian_matrix(rng);
      const auto vm = von_neumann_max_check(a, b, 1000, i);
      REQUIRE(std::abs(vm.sup_found - vm.analytic) <= 1e-10 * (1.0 + vm.analytic));
      REQUIRE(std::abs(vm.constructed - vm.analytic) <= 1e-10 * (1.0 + vm.analytic));
      REQUIRE(vm.best_sample <= vm.analytic * (1.0 + 1e-12));
    }
  }
  CHECK(von_neumann_max_scan(200, 500, 4).passed());
}

TEST_CASE("lambda_max convexity") {
  const Mat2 f = Mat2{1.0, 2.0, -0.5, 0.3};
  CHECK(lambda_max_convexity_check(f, f, 0.3) == doctest::Approx(0.0).scale(1.0));
  CHECK(lambda_max_convexity_check(Mat2::diag(2.0, 1.0), Mat2::diag(1.0, 2.0), 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lambda_max_convexity_check(f, f, 0.5, {0.5, 1.0}), InvalidWeights);
  CHECK_THROWS_AS(lambda_max_convexity_check(f, f, 0.5, {1.0, -0.1}), InvalidWeights);
  // r = (1, 0) reduces to lambda_max.
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = sample_rng(51, i);
    const Mat2 a = random_gaussian_matrix(rng);
    const Mat2 b = random_gaussian_matrix(rng);
    const double t = uniform(rng, 0.0, 1.0);
    REQUIRE(lambda_max_convexity_check(a, b, t) == lambda_max_convexity_check(a, b, t, {1.0, 0.0}));
  }
  CHECK(lambda_max_scan(20000, 6, false).passed());
  CHECK(lambda_max_scan(20000, 6, true).passed());
}

TEST_CASE("Y curves") {
  const ScalarCurve c = make_y_curve(0.125, 1000.0, 1000);
  CHECK(c.grid.front() == 1.0);
  CHECK(c.values.front() == 1.0);
  CHECK(c.grid.back() == 1000.0);
  for (std::size_t i = 1; i < c.grid.size(); ++i) {
    REQUIRE(c.grid[i] > c.grid[i - 1]);
    REQUIRE(c.values[i] > 0.0);
  }
  const auto neg = negative_curvature_interval(c);
  REQUIRE(neg.has_value());
  // Negative on s in (4 - 2 sqrt 2, 4 + 2 sqrt 2), deepest near theta = e^4.
  CHECK(std::log(neg->theta_lo) == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(0.02));
  CHECK(std::log(neg->theta_hi) == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(0.02));
  CHECK(std::log(neg->theta_worst) == doctest::Approx(4.0).epsilon(0.1));
  CHECK_FALSE(negative_curvature_interval(make_y_curve(0.25, 1000.0, 1000)).has_value());
  CHECK_FALSE(negative_curvature_interval(make_y_curve(0.25, std::exp(10.0), 10000)).has_value());
  CHECK_FALSE(negative_curvature_interval(make_y_curve(0.5, 1000.0, 1000)).has_value());
  CHECK_THROWS_AS(make_y_curve(0.25, 1.0, 10), DomainError);
  CHECK_THROWS_AS(make_y_curve(0.25, 10.0, 1), DomainError);
  const std::string csv = curve_to_csv(make_y_curve(0.25, 10.0, 3));
  CHECK(csv.rfind("theta,y\n1,1\n", 0) == 0);
}

TEST_CASE("ScanReport JSON round trip") {
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
    const ScanReport r = rank_one_scan(kDefault, 200, seed);
    const auto j = to_json(r);
    CHECK(j["passed"].get<bool>() == r.passed());
    const ScanReport back = scan_report_from_json(nlohmann::ordered_json::parse(j.dump()));
    CHECK(back == r);
  }
}
