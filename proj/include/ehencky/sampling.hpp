#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "ehencky/tensor2.hpp"

namespace ehencky {

/// Default scan seed ("EHEY").
inline constexpr std::uint64_t kDefaultSeed = 0x45484559ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Generator for sample `index` of a scan seeded with `seed`. Independent of evaluation order.
inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

double uniform(Rng& rng, double lo, double hi);

/// Haar-distributed rotation in SO(2).
Mat2 random_rotation(Rng& rng);

/// Haar-distributed element of O(2); reflections with probability 1/2.
Mat2 random_orthogonal(Rng& rng);

std::array<double, 2> random_unit_vector(Rng& rng);

/// F = Q1 diag(l1, l2) Q2 with log l_i uniform on [-log_range, log_range], Q_i Haar rotations.
Mat2 random_deformation(Rng& rng, double log_range = 2.0);

/// Matrix with independent standard normal entries (any determinant sign).
Mat2 random_gaussian_matrix(Rng& rng);

}  // namespace ehencky
