#pragma once

// Instance builders shared by the gate suite and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "radial/gate.hpp"
#include "radial/matcore.hpp"
#include "radial/random.hpp"

namespace radial::fixture {

inline const CMatrix kNonnormal3{{1, 0, 0}, {0, 0.5, 0.5}, {0, 0, 0.5}};

/// Normal matrix V diag(l) V* straddling the |2 l_j - l_1| <= |l_1| test:
/// l_1 = mu, the rest mu (1 + z) / 2 with |z| < 1.3, plus occasional exact
/// boundary cases (repeated mu, zero) and a second peak of equal modulus.
inline CMatrix random_normal_mixed(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const cplx mu = rng.uniform(0.25, 4.0) * rng.unit_phase();
  CVector lam(n);
  lam[0] = mu;
  for (std::size_t j = 1; j < n; ++j) {
    const double u = rng.uniform();
    if (u < 0.05)
      lam[j] = mu;
    else if (u < 0.10)
      lam[j] = 0.0;
    else if (u < 0.15)
      lam[j] = mu * rng.unit_phase();
    else {
      const cplx z = 1.3 * std::sqrt(rng.uniform()) * rng.unit_phase();
      // keep mu strictly dominant so the two-peak case only comes from above
      const cplx l = 0.5 * mu * (1.0 + z);
      lam[j] = std::abs(l) < std::abs(mu) * (1.0 - 1e-3) ? l : 0.5 * mu * (1.0 + 0.9 * z / std::abs(z));
    }
  }
  const CMatrix v = haar_unitary(rng, n);
  return v * CMatrix::diagonal(lam) * v.adjoint();
}

/// True when a normal matrix sits near a decision threshold of the normal
/// criterion: relative distance in (1e-10, band]. Points on a threshold up to
/// rounding (repeated mu, a zero eigenvalue, an exact second peak) are decided
/// cases and stay in.
inline bool normal_in_band(const CVector& ev_in, double band) {
  CVector ev = ev_in;
  std::stable_sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
  const double top = std::abs(ev[0]);
  auto near = [&](double d) { return d > 1e-10 * top && d <= band * top; };
  for (std::size_t j = 1; j < ev.size(); ++j) {
    if (near(std::abs(ev[j] - ev[0])) || near(std::abs(std::abs(ev[j]) - top))) return true;
    if (near(std::abs(std::abs(2.0 * ev[j] - ev[0]) - top))) return true;
  }
  return false;
}

/// Random invertible C with condition number at most 1e6, from three
/// families: (I + K)/2 for a contraction K, a Ginibre draw, and a small
/// perturbation of a half-disk matrix (near the threshold).
inline CMatrix random_invertible(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    CMatrix c;
    const double u = rng.uniform();
    if (u < 0.4) {
      c = (CMatrix::identity(n) + random_contraction(rng, n) * rng.uniform(0.3, 1.0)) * 0.5;
    } else if (u < 0.7) {
      c = rng.ginibre(n, n, rng.uniform(0.2, 2.0));
    } else {
      const CMatrix k = random_contraction(rng, n);
      const double nk = op_norm(k);
      const double s = nk > 0.0 ? rng.uniform(0.98, 1.02) / nk : 1.0;
      c = (CMatrix::identity(n) + k * s) * 0.5;
    }
    const auto ev = eigenvalues(c);
    double min_mod = std::numeric_limits<double>::infinity();
    for (const auto& z : ev) min_mod = std::min(min_mod, std::abs(z));
    if (min_mod <= 1e-7 * (1.0 + op_norm(c))) continue;
    if (op_norm(c) * op_norm(inverse(c)) > 1e6) continue;
    return c;
  }
}

}  // namespace radial::fixture
