#include "ehencky/sampling.hpp"

#include <cmath>
#include <numbers>

namespace ehencky {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Mat2 random_rotation(Rng& rng) { return Mat2::rotation(uniform(rng, 0.0, 2.0 * std::numbers::pi)); }

Mat2 random_orthogonal(Rng& rng) {
  Mat2 q = random_rotation(rng);
  if (std::bernoulli_distribution(0.5)(rng)) {
    q = q * Mat2::diag(1.0, -1.0);
  }
  return q;
}

std::array<double, 2> random_unit_vector(Rng& rng) {
  const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return {std::cos(a), std::sin(a)};
}

Mat2 random_deformation(Rng& rng, double log_range) {
  const Mat2 q1 = random_rotation(rng);
  const Mat2 q2 = random_rotation(rng);
  const double l1 = std::exp(uniform(rng, -log_range, log_range));
  const double l2 = std::exp(uniform(rng, -log_range, log_range));
  return q1 * Mat2::diag(l1, l2) * q2;
}

Mat2 random_gaussian_matrix(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(rng);
  const double b = n(rng);
  const double c = n(rng);
  const double d = n(rng);
  return {a, b, c, d};
}

}  // namespace ehencky
