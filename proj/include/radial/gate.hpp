#pragma once

// Characterization of the matrices A with rho(AB) <= r(A) r(B) for every B:
// a unique modulus-maximal eigenvalue mu with ||A/mu - I/2|| <= 1/2, or
// equivalently A unitarily similar to mu (I_p + 0_q + C) with C invertible,
// ||C - I/2|| <= 1/2, Re(C^{-1}) >= I.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "radial/matcore.hpp"
#include "radial/matrix.hpp"
#include "radial/random.hpp"
#include "radial/tolerances.hpp"
#include "radial/wnum.hpp"

namespace radial {

struct GateVerdict {
  bool satisfied = false;
  bool zero_matrix = false;  // A = 0: the product inequality holds trivially
  cplx mu{};
  double spectral_radius = 0.0;
  double norm = 0.0;                      // ||A||
  std::optional<double> half_norm;        // ||A/mu - I/2||
  std::optional<double> contraction_norm; // ||L|| = ||2A/mu - I||
  int max_modulus_count = 0;
  bool boundary = false;
  CVector spectrum;
  std::vector<std::string> diagnostics;
};

struct CanonicalForm {
  cplx mu{};
  std::size_t p = 0;
  std::size_t q = 0;
  CMatrix C;  // (n - p - q) square, possibly empty
  CMatrix U;  // A = U mu (I_p + 0_q + C) U*
  double residual = 0.0;
  double c_half_norm = 0.0;        // ||C - I/2||, 0 when C is empty
  double c_inverse_re_min = 0.0;   // lambda_min(Re(C^-1)), +inf when C is empty
};

struct HalfDiskReport {
  bool norm_predicate = false;     // ||C - I/2|| <= 1/2
  bool inverse_predicate = false;  // lambda_min(Re(C^-1)) >= 1
  double norm_value = 0.0;
  double inverse_min = 0.0;
  bool in_band = false;            // either raw value inside the boundary band
};

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// Single-linkage clusters of points at distance <= eps; returns the
/// cluster id of each point.
inline std::vector<std::size_t> cluster_points(const CVector& pts, double eps) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> id(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (id[i] != n) continue;
    id[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < n; ++b)
        if (id[b] == n && std::abs(pts[a] - pts[b]) <= eps) {
          id[b] = next;
          stack.push_back(b);
        }
    }
    ++next;
  }
  return id;
}

}  // namespace detail

/// Decide the characterization for a square A.
///
/// Eigenvalues within tol.cluster * (1 + ||A||) of each other count as one
/// spectrum point; the uniqueness requirement is on spectrum points, so a
/// repeated mu is allowed.
inline GateVerdict check_condition_c(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "check_condition_c");
  if (a.empty()) throw std::invalid_argument("check_condition_c: empty matrix");
  GateVerdict v;
  v.norm = op_norm(a, tol);
  if (v.norm == 0.0) {
    v.zero_matrix = true;
    v.spectrum = CVector(a.rows(), cplx{});
    v.diagnostics.push_back("A = 0: the product inequality holds trivially, but the characterization needs A nonzero");
    return v;
  }
  const double tc = tol.cluster * (1.0 + v.norm);
  v.spectrum = eigenvalues(a, tol);
  for (const auto& z : v.spectrum) v.spectral_radius = std::max(v.spectral_radius, std::abs(z));

  CVector top;
  for (const auto& z : v.spectrum)
    if (std::abs(z) >= v.spectral_radius - tc) top.push_back(z);
  const auto ids = detail::cluster_points(top, tc);
  v.max_modulus_count = static_cast<int>(*std::max_element(ids.begin(), ids.end()) + 1);

  // Cluster means; with several top clusters, mu is the one minimizing
  // ||A/mu - I/2|| so the reported norm does not depend on rounding order.
  const std::size_t clusters = static_cast<std::size_t>(v.max_modulus_count);
  CVector means(clusters);
  std::vector<std::size_t> counts(clusters, 0);
  for (std::size_t i = 0; i < top.size(); ++i) {
    means[ids[i]] += top[i];
    ++counts[ids[i]];
  }
  for (std::size_t c = 0; c < clusters; ++c) means[c] /= static_cast<double>(counts[c]);
  v.mu = means[0];

  if (v.spectral_radius <= tc) {
    v.diagnostics.push_back("spectral radius is zero (within " + detail::fmt(tc) +
                            ") but A is nonzero: no admissible mu");
    return v;
  }

  const CMatrix half_id = CMatrix::identity(a.rows()) * 0.5;
  double half = std::numeric_limits<double>::infinity();
  for (const auto& m : means)
    if (const double h = op_norm(a / m - half_id, tol); h < half) {
      half = h;
      v.mu = m;
    }
  v.half_norm = half;
  v.contraction_norm = 2.0 * half;
  v.satisfied = v.max_modulus_count == 1 && half <= 0.5 + tol.gate;

  if (v.max_modulus_count > 1)
    v.diagnostics.push_back(std::to_string(v.max_modulus_count) +
                            " distinct eigenvalues attain the spectral radius");
  const double excess = half - 0.5;
  if (v.max_modulus_count == 1 && excess > 1e-10 && excess <= tol.boundary_flag) {
    v.boundary = true;
    v.diagnostics.push_back("boundary: ||A/mu - I/2|| - 1/2 = " + detail::fmt(excess) + " is within " +
                            detail::fmt(tol.boundary_flag) + " of the threshold");
  }
  if (v.max_modulus_count == 1 && excess > tol.gate)
    v.diagnostics.push_back("||A/mu - I/2|| = " + detail::fmt(half) + " exceeds 1/2");
  for (const auto& z : v.spectrum) {
    const double gap = v.spectral_radius - std::abs(z);
    if (gap > tc && gap <= tol.boundary_flag * (1.0 + v.norm))
      v.diagnostics.push_back("boundary: an eigenvalue of modulus within " + detail::fmt(gap) +
                              " of the spectral radius was treated as distinct");
  }
  return v;
}

/// ||C - I/2|| <= 1/2 versus lambda_min(Re(C^-1)) >= 1 for invertible C.
inline HalfDiskReport halfdisk_equiv(const CMatrix& c, const Tolerances& tol = default_tolerances()) {
  detail::require_square(c, "halfdisk_equiv");
  if (c.empty()) throw std::invalid_argument("halfdisk_equiv: empty matrix");
  const double nc = op_norm(c, tol);
  double min_mod = std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues(c, tol)) min_mod = std::min(min_mod, std::abs(z));
  if (min_mod <= tol.cluster * (1.0 + nc)) throw std::invalid_argument("halfdisk_equiv: C is singular");
  HalfDiskReport r;
  r.norm_value = op_norm(c - CMatrix::identity(c.rows()) * 0.5, tol);
  r.inverse_min = herm_extremes(hermitian_part(inverse(c))).first;
  r.norm_predicate = r.norm_value <= 0.5 + tol.gate;
  r.inverse_predicate = r.inverse_min >= 1.0 - tol.inverse_real_part;
  r.in_band = std::abs(r.norm_value - 0.5) <= tol.equivalence_band ||
              std::abs(r.inverse_min - 1.0) <= tol.equivalence_band;
  return r;
}

/// Canonical form mu (I_p + 0_q + C) of a matrix that passes the gate.
///
/// Works on the Schur form of A/mu: eigenvalue-1 entries are rotated to the
/// front, and since they attain ||A/mu|| = 1 their rows and columns vanish.
/// Zero diagonal entries of the remainder attain ||A_1 - I/2|| = 1/2 in
/// A_1 - I/2, so their rows and columns vanish too and a permutation moves
/// them next. Each vanishing is checked against tol.split before zeroing.
inline CanonicalForm decompose_condition_d(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  const GateVerdict verdict = check_condition_c(a, tol);
  if (!verdict.satisfied) throw std::domain_error("decompose_condition_d: A does not pass the gate");
  const std::size_t n = a.rows();
  const cplx mu = verdict.mu;
  const CMatrix an = a / mu;
  const double nan_ = op_norm(an, tol);
  const double tc = tol.cluster * (1.0 + nan_);
  const double ts = tol.split * (1.0 + nan_);

  SchurForm s = schur(an, tol);
  std::size_t p = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(s.T(j, j) - 1.0) > tc) continue;
    for (std::size_t k = j; k > p; --k) swap_schur_adjacent(s, k - 1);
    ++p;
  }
  if (p == 0) throw numerical_error("decompose_condition_d: no Schur diagonal entry matches mu");

  auto check_vanishing = [&](std::size_t i, std::size_t from, const char* what) {
    double worst = 0.0;
    for (std::size_t j = from; j < n; ++j)
      if (j != i) worst = std::max({worst, std::abs(s.T(i, j)), std::abs(s.T(j, i))});
    if (worst > ts)
      throw numerical_error(std::string("decompose_condition_d: ") + what + " split failed at index " +
                            std::to_string(i) + ": off-diagonal magnitude " + detail::fmt(worst) +
                            " exceeds " + detail::fmt(ts));
    for (std::size_t j = from; j < n; ++j)
      if (j != i) s.T(i, j) = s.T(j, i) = 0.0;
  };
  for (std::size_t i = 0; i < p; ++i) {
    check_vanishing(i, 0, "identity block");
    s.T(i, i) = 1.0;
  }

  std::vector<std::size_t> zeros, rest;
  for (std::size_t i = p; i < n; ++i) (std::abs(s.T(i, i)) <= tc ? zeros : rest).push_back(i);
  for (const auto i : zeros) {
    check_vanishing(i, p, "null block");
    s.T(i, i) = 0.0;
  }
  const std::size_t q = zeros.size();

  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  order.insert(order.end(), zeros.begin(), zeros.end());
  order.insert(order.end(), rest.begin(), rest.end());
  CMatrix tp(n, n), up(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      tp(i, j) = s.T(order[i], order[j]);
      up(i, j) = s.U(i, order[j]);
    }

  CanonicalForm cf;
  cf.mu = mu;
  cf.p = p;
  cf.q = q;
  const std::size_t m = n - p - q;
  cf.C = tp.block(p + q, p + q, m, m);
  cf.U = std::move(up);
  cf.residual = op_norm(a - cf.U * (tp * mu) * cf.U.adjoint(), tol);
  const double na = op_norm(a, tol);
  if (cf.residual > tol.reassembly * (1.0 + na))
    throw numerical_error("decompose_condition_d: reassembly residual " + detail::fmt(cf.residual) +
                          " exceeds " + detail::fmt(tol.reassembly * (1.0 + na)));
  if (m == 0) {
    cf.c_inverse_re_min = std::numeric_limits<double>::infinity();
    return cf;
  }
  cf.c_half_norm = op_norm(cf.C - CMatrix::identity(m) * 0.5, tol);
  cf.c_inverse_re_min = herm_extremes(hermitian_part(inverse(cf.C))).first;
  if (cf.c_half_norm > 0.5 + tol.gate || cf.c_inverse_re_min < 1.0 - tol.inverse_real_part)
    throw numerical_error("decompose_condition_d: residual block fails the half-disk test (||C - I/2|| = " +
                          detail::fmt(cf.c_half_norm) + ", lambda_min(Re C^-1) = " +
                          detail::fmt(cf.c_inverse_re_min) + ")");
  return cf;
}

/// mu (I_p + 0_q + C) conjugated by U.
inline CMatrix assemble_canonical(const CanonicalForm& cf) {
  const std::size_t n = cf.p + cf.q + cf.C.rows();
  CMatrix core(n, n);
  for (std::size_t i = 0; i < cf.p; ++i) core(i, i) = 1.0;
  core.set_block(cf.p + cf.q, cf.p + cf.q, cf.C);
  return cf.U * (core * cf.mu) * cf.U.adjoint();
}

/// Normal-matrix criterion: |2 l_j - l_1| <= |l_1| for every eigenvalue,
/// with l_1 the modulus-dominant one (false if two distinct eigenvalues
/// share the top modulus).
inline bool check_normal(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "check_normal");
  const double na = op_norm(a, tol);
  if (na == 0.0) return false;
  if (!is_normal(a, tol.normality, tol)) throw std::invalid_argument("check_normal: A is not normal");
  CVector ev = eigenvalues(a, tol);
  std::stable_sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
  const double tc = tol.cluster * (1.0 + na);
  const cplx l1 = ev[0];
  if (std::abs(l1) <= tc) return false;
  for (std::size_t j = 1; j < ev.size(); ++j) {
    if (std::abs(ev[j]) >= std::abs(l1) - tc && std::abs(ev[j] - l1) > tc) return false;
    if (std::abs(2.0 * ev[j] - l1) > std::abs(l1) * (1.0 + 2.0 * tol.gate)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Instance generators on both sides of the gate.

enum class ViolationKind { two_peaks, expansive, either };

struct GeneratorParams {
  double mu_modulus_min = 0.25;
  double mu_modulus_max = 4.0;
  std::size_t identity_dim = 0;  // 0: uniform in [1, n-1]
  std::size_t null_dim = 0;      // eigenvalue-(-1) block of L, i.e. 0_q in A
  double margin = 0.2;           // ||L|| >= 1 + margin for expansive violators
  ViolationKind kind = ViolationKind::either;
  double reject_distance = 1e-3; // resample K if dist(1, sigma(K)) is below this
  int max_attempts = 1000;
};

namespace detail {

inline cplx random_mu(Rng& rng, const GeneratorParams& gp) {
  return rng.uniform(gp.mu_modulus_min, gp.mu_modulus_max) * rng.unit_phase();
}

inline cplx random_in_disk(Rng& rng, double radius) {
  return radius * std::sqrt(rng.uniform()) * rng.unit_phase();
}

}  // namespace detail

/// A = mu (I + L) / 2 with L = U (I_k + (-I_z) + K) U*, K a random
/// contraction whose spectrum stays away from 1 (and from the unit circle,
/// so mu stays the only modulus-maximal eigenvalue).
inline CMatrix gen_satisfying(std::size_t n, std::uint64_t seed, const GeneratorParams& gp = {}) {
  if (n < 2) throw std::invalid_argument("gen_satisfying: n must be at least 2");
  Rng rng(seed);
  const cplx mu = detail::random_mu(rng, gp);
  std::size_t k = gp.identity_dim ? std::min(gp.identity_dim, n) : 1 + rng.index(n - 1);
  const std::size_t z = std::min(gp.null_dim, n - k);
  const std::size_t m = n - k - z;
  CMatrix kblock;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= gp.max_attempts) throw numerical_error("gen_satisfying: rejection sampling exhausted");
    kblock = random_contraction(rng, m);
    if (m == 0) break;
    bool ok = true;
    for (const auto& l : eigenvalues(kblock)) {
      if (std::abs(l - 1.0) < gp.reject_distance) ok = false;
      if (std::abs(0.5 * (1.0 + l)) > 1.0 - 1e-6) ok = false;
    }
    if (ok) break;
  }
  CMatrix core(n, n);
  for (std::size_t i = 0; i < k; ++i) core(i, i) = 1.0;
  for (std::size_t i = k; i < k + z; ++i) core(i, i) = -1.0;
  core.set_block(k + z, k + z, kblock);
  const CMatrix u = haar_unitary(rng, n);
  const CMatrix l = u * core * u.adjoint();
  return (CMatrix::identity(n) + l) * (0.5 * mu);
}

/// Matrices failing the gate:
///  two_peaks  - two distinct eigenvalues of the same top modulus;
///  expansive  - A = mu (I + L) / 2 with mu the unique dominant eigenvalue
///               and ||L|| = 1 + margin.
inline CMatrix gen_violating(std::size_t n, std::uint64_t seed, const GeneratorParams& gp = {}) {
  if (n < 2) throw std::invalid_argument("gen_violating: n must be at least 2");
  Rng rng(seed);
  const cplx mu = detail::random_mu(rng, gp);
  ViolationKind kind = gp.kind;
  if (kind == ViolationKind::either) kind = rng.uniform() < 0.5 ? ViolationKind::two_peaks : ViolationKind::expansive;

  if (kind == ViolationKind::two_peaks) {
    CMatrix t(n, n);
    t(0, 0) = 1.0;
    const double alpha = rng.uniform(0.3, 2.0 * std::numbers::pi - 0.3);
    t(1, 1) = cplx{std::cos(alpha), std::sin(alpha)};
    for (std::size_t i = 2; i < n; ++i) t(i, i) = detail::random_in_disk(rng, 0.8);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) t(i, j) = 0.5 * rng.complex_normal();
    const CMatrix v = haar_unitary(rng, n);
    return v * t * v.adjoint() * mu;
  }

  const std::size_t k = gp.identity_dim ? std::min(gp.identity_dim, n - 1) : 1 + rng.index(n - 1);
  const std::size_t m = n - k;
  const double target = 1.0 + gp.margin;
  CMatrix kblock(m, m);
  if (m == 1) {
    // Scalar block: -(1 + margin) e^{i beta} keeps |(1 + K)/2| < 1.
    const double beta = rng.uniform(-1.5, 1.5);
    kblock(0, 0) = -target * cplx{std::cos(beta), std::sin(beta)};
  } else {
    CMatrix d(m, m), nil(m, m);
    for (std::size_t i = 0; i < m; ++i) d(i, i) = detail::random_in_disk(rng, 0.9);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) nil(i, j) = rng.complex_normal();
    // ||D + s N|| grows without bound in s; bisect for the target norm.
    double lo = 0.0, hi = 1.0;
    while (op_norm(d + nil * hi) < target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (op_norm(d + nil * mid) < target ? lo : hi) = mid;
    }
    const CMatrix w = haar_unitary(rng, m);
    kblock = w * (d + nil * hi) * w.adjoint();
  }
  CMatrix core(n, n);
  for (std::size_t i = 0; i < k; ++i) core(i, i) = 1.0;
  core.set_block(k, k, kblock);
  const CMatrix u = haar_unitary(rng, n);
  return (CMatrix::identity(n) + u * core * u.adjoint()) * (0.5 * mu);
}

}  // namespace radial
