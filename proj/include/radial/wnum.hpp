#pragma once

// Numerical range W(A) = {(Ax, x) : |x| = 1} and numerical radius
// r(A) = max{|z| : z in W(A)}.
//
// Everything here goes through the support function
//   s(theta) = lambda_max(Re(e^{i theta} A)) = max_{z in W(A)} Re(e^{i theta} z),
// which determines the compact convex set W(A), and r(A) = max_theta s(theta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "radial/matcore.hpp"
#include "radial/matrix.hpp"
#include "radial/tolerances.hpp"

namespace radial {

/// Boundary sample of W(A) on a uniform angle grid.
struct RangeSample {
  std::vector<double> angles;
  std::vector<double> support;
  CVector boundary;  // (A v, v) for the maximizing eigenvector v at each angle
};

/// A = H + iK split into Hermitian parts, so Re(e^{it}A) = cos(t) H - sin(t) K.
class RotatedHermitian {
public:
  explicit RotatedHermitian(const CMatrix& a) : h_(a.rows(), a.cols()), k_(a.rows(), a.cols()) {
    detail::require_square(a, "numerical range");
    detail::require_finite(a, "numerical range");
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const cplx z = a(i, j), zt = std::conj(a(j, i));
        h_(i, j) = 0.5 * (z + zt);
        k_(i, j) = cplx{0.0, -0.5} * (z - zt);
      }
  }

  CMatrix at(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    CMatrix m(h_.rows(), h_.cols());
    auto hd = h_.data(), kd = k_.data();
    auto md = m.data();
    for (std::size_t i = 0; i < md.size(); ++i) md[i] = c * hd[i] - s * kd[i];
    return m;
  }

  double support(double theta) const { return herm_extremes(at(theta)).second; }

  std::size_t dim() const noexcept { return h_.rows(); }

private:
  CMatrix h_;
  CMatrix k_;
};

/// Support values s(2 pi k / count) for k = 0..count-1. For even counts the
/// opposite angle comes for free as -lambda_min.
inline std::vector<double> support_grid(const RotatedHermitian& rh, std::size_t count) {
  std::vector<double> s(count);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  if (count % 2 == 0) {
    const std::size_t half = count / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const auto [lo, hi] = herm_extremes(rh.at(step * static_cast<double>(k)));
      s[k] = hi;
      s[k + half] = -lo;
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) s[k] = rh.support(step * static_cast<double>(k));
  }
  return s;
}

inline double support_value(const CMatrix& a, double theta) { return RotatedHermitian(a).support(theta); }

namespace detail {

/// Golden-section search for a maximum of f on [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double width) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > width) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
    if (x1 >= x2) break;  // interval below double resolution
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace detail

/// r(A) from a coarse angle grid plus golden-section refinement of the
/// best local maxima of the support function.
inline double numerical_radius(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  if (a.empty()) return 0.0;
  const RotatedHermitian rh(a);
  if (a.rows() == 1) return std::abs(a(0, 0));
  const std::size_t n = tol.radius_grid;
  const auto s = support_grid(rh, n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);

  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < n; ++k) {
    const double prev = s[(k + n - 1) % n], next = s[(k + 1) % n];
    if (s[k] >= prev && s[k] >= next) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t i, std::size_t j) { return s[i] > s[j]; });
  // Flat support (e.g. A = cI) makes every index a peak; a handful suffices.
  if (peaks.size() > tol.radius_refine_candidates) peaks.resize(tol.radius_refine_candidates);

  double best = *std::max_element(s.begin(), s.end());
  for (const auto k : peaks) {
    const double mid = step * static_cast<double>(k);
    const auto [theta, value] = detail::golden_max([&](double t) { return rh.support(t); }, mid - step,
                                                   mid + step, tol.radius_angle_width);
    (void)theta;
    best = std::max(best, value);
  }
  return std::max(best, 0.0);
}

/// Uniform boundary sample of W(A) with `samples` angles.
inline RangeSample sample_range(const CMatrix& a, std::size_t samples,
                                const Tolerances& tol = default_tolerances()) {
  if (samples == 0) throw std::invalid_argument("sample_range: need at least one angle");
  const RotatedHermitian rh(a);
  RangeSample out;
  out.angles.resize(samples);
  out.support.resize(samples);
  out.boundary.resize(samples);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = step * static_cast<double>(k);
    const auto [value, vec] = herm_max(rh.at(theta), tol);
    out.angles[k] = theta;
    out.support[k] = value;
    out.boundary[k] = inner(a * vec, vec);
  }
  return out;
}

/// Largest violation max_theta [Re(e^{i theta} z) - s(theta)] over a support
/// grid; <= 0 means z lies in the circumscribed polygon of W(A).
inline double range_excess(cplx z, std::span<const double> support) {
  const std::size_t n = support.size();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = step * static_cast<double>(k);
    worst = std::max(worst, z.real() * std::cos(t) - z.imag() * std::sin(t) - support[k]);
  }
  return worst;
}

/// Support-function membership test z in W(A) on the default angle grid.
inline bool in_range(cplx z, const CMatrix& a, double tol_abs, const Tolerances& tol = default_tolerances()) {
  const auto s = support_grid(RotatedHermitian(a), tol.radius_grid);
  return range_excess(z, s) <= tol_abs;
}

inline bool in_range(cplx z, const CMatrix& a) { return in_range(z, a, default_tolerances().range_membership); }

/// r(x (x) y) = (|x||y| + |(x, y)|) / 2; (1 + |(x, y)|) / 2 for unit vectors.
inline double r_rank_one(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw std::invalid_argument("r_rank_one: dimension mismatch");
  const double nx = norm2(x), ny = norm2(y);
  if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("r_rank_one: zero vector");
  return 0.5 * (nx * ny + std::abs(inner(x, y)));
}

// ---------------------------------------------------------------------------
// sigma(AB) in W(A) W(B) for A a scalar multiple of a PSD matrix.

struct ContainmentEntry {
  cplx eigenvalue;
  bool contained = false;
  double margin = 0.0;  // best range_excess over factors a in W(A); <= tol means contained
  cplx factor{};        // a in W(A) attaining the margin
};

struct ContainmentReport {
  cplx phase{1.0};  // A = phase * P with P PSD
  double p_min = 0.0;
  double p_max = 0.0;
  std::vector<ContainmentEntry> entries;
  bool all_contained = true;
};

/// Phase and spectral interval of A = phase * P, P positive semidefinite.
/// Throws std::invalid_argument when A is not of that form.
inline ContainmentReport psd_multiple_profile(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "product_containment_check");
  ContainmentReport rep;
  const double na = op_norm(a, tol);
  if (na == 0.0) return rep;
  if (!is_normal(a, tol.normality, tol))
    throw std::invalid_argument("product_containment_check: A is not normal");
  const auto ev = eigenvalues(a, tol);
  const cplx top = *std::max_element(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  rep.phase = top / std::abs(top);
  rep.p_min = std::numeric_limits<double>::infinity();
  rep.p_max = 0.0;
  const double band = tol.collinearity * na;
  for (const auto& l : ev) {
    const cplx w = l / rep.phase;
    if (std::abs(w.imag()) > band || w.real() < -band)
      throw std::invalid_argument("product_containment_check: spectrum of A is not on a ray through 0");
    rep.p_min = std::min(rep.p_min, std::max(0.0, w.real()));
    rep.p_max = std::max(rep.p_max, w.real());
  }
  return rep;
}

/// For each eigenvalue l of AB, search a in W(A) = phase*[p_min, p_max] with
/// l / a in W(B). The segment is scanned on a (log-spaced near 0) grid and
/// the best grid cell refined by golden section; the excess is quasi-convex
/// along the segment.
inline ContainmentReport product_containment_check(const CMatrix& a, const CMatrix& b,
                                                   const Tolerances& tol = default_tolerances()) {
  detail::require_square(b, "product_containment_check");
  if (a.rows() != b.rows()) throw std::invalid_argument("product_containment_check: dimension mismatch");
  ContainmentReport rep = psd_multiple_profile(a, tol);
  const auto sb = support_grid(RotatedHermitian(b), tol.radius_grid);
  const double sb_scale = *std::max_element(sb.begin(), sb.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  const double accept = tol.range_membership * (1.0 + std::abs(sb_scale));
  const double na = op_norm(a, tol), nb = op_norm(b, tol);
  const auto ev = eigenvalues(a * b, tol);

  const bool zero_in_wa = rep.p_min <= tol.collinearity * na;
  const double m_lo = std::max(rep.p_min, tol.containment_floor * rep.p_max);
  const double m_hi = rep.p_max;

  std::vector<double> grid;
  if (m_hi > 0.0) {
    const std::size_t g = std::max<std::size_t>(tol.containment_grid, 2);
    grid.resize(g);
    const bool logarithmic = m_lo < 1e-3 * m_hi;
    for (std::size_t i = 0; i < g; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(g - 1);
      grid[i] = logarithmic ? m_lo * std::pow(m_hi / m_lo, f) : m_lo + f * (m_hi - m_lo);
    }
    grid.back() = m_hi;
  }

  for (const auto& l : ev) {
    ContainmentEntry e;
    e.eigenvalue = l;
    if (std::abs(l) <= 1e-10 * (1.0 + na * nb) || m_hi == 0.0) {
      // 0 = a w needs a = 0 or w = 0.
      // (A = 0 lands here too: AB = 0.)
      const double excess0 = range_excess(cplx{}, sb);
      e.contained = zero_in_wa || excess0 <= accept;
      e.margin = zero_in_wa ? std::min(0.0, excess0) : excess0;
      e.factor = zero_in_wa ? cplx{} : rep.phase * m_hi;
    } else {
      auto excess = [&](double s) { return range_excess(l / (rep.phase * s), sb); };
      std::size_t best_i = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = excess(grid[i]);
        if (v < best) {
          best = v;
          best_i = i;
        }
      }
      double best_s = grid[best_i];
      if (grid.size() > 1 && best > 0.0) {
        const double lo = grid[best_i == 0 ? 0 : best_i - 1];
        const double hi = grid[std::min(best_i + 1, grid.size() - 1)];
        const auto [s_opt, neg] = detail::golden_max([&](double s) { return -excess(s); }, lo, hi,
                                                     1e-15 * std::max(1.0, hi));
        if (-neg < best) {
          best = -neg;
          best_s = s_opt;
        }
      }
      e.margin = best;
      e.factor = rep.phase * best_s;
      e.contained = best <= accept;
    }
    rep.all_contained = rep.all_contained && e.contained;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace radial
