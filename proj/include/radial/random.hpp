#pragma once

// Seeded, portable random matrix ensembles.
//
// std::mt19937_64 has a fully specified output sequence; the standard
// distributions do not, so uniform and Gaussian variates are derived here
// directly from the raw 64-bit stream. Same seed => bit-identical output on
// every conforming platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "radial/matcore.hpp"
#include "radial/matrix.hpp"

namespace radial {

/// SplitMix64 finalizer, used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix_seed(mix_seed(seed) ^ (index + 1) * 0xd1b54a32d192ed03ULL);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  /// Standard normal via Box-Muller (no cached second variate).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circular complex Gaussian with E|z|^2 = 1.
  cplx complex_normal() { return {normal() * std::numbers::sqrt2 / 2.0, normal() * std::numbers::sqrt2 / 2.0}; }

  cplx unit_phase() {
    const double a = uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(a), std::sin(a)};
  }

  CVector unit_vector(std::size_t n) {
    CVector v(n);
    double nn = 0.0;
    while (nn == 0.0) {
      for (auto& z : v) z = complex_normal();
      nn = norm2(v);
    }
    for (auto& z : v) z /= nn;
    return v;
  }

  CMatrix ginibre(std::size_t rows, std::size_t cols, double scale = 1.0) {
    CMatrix m(rows, cols);
    for (auto& z : m.data()) z = scale * complex_normal();
    return m;
  }

private:
  std::mt19937_64 engine_;
};

/// Haar unitary: QR of a Ginibre sample with the phases of diag(R) removed.
inline CMatrix haar_unitary(Rng& rng, std::size_t n) {
  CMatrix q = rng.ginibre(n, n);
  // Modified Gram-Schmidt, twice for orthogonality to roundoff.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        cplx d{};
        for (std::size_t i = 0; i < n; ++i) d += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
      }
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) nn += std::norm(q(i, j));
    nn = std::sqrt(nn);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nn;
  }
  return q;
}

inline CMatrix rand_unitary(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(rng, n);
}

/// Ginibre sample divided by max(1, ||G||).
inline CMatrix random_contraction(Rng& rng, std::size_t n) {
  CMatrix g = rng.ginibre(n, n);
  const double nrm = op_norm(g);
  if (nrm > 1.0) g /= nrm;
  return g;
}

inline CMatrix rand_contraction(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_contraction(rng, n);
}

inline CMatrix rand_matrix(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  return rng.ginibre(n, n, scale);
}

}  // namespace radial
