#pragma once

// Dense complex kernels: Hermitian eigensolver, complex Schur form,
// operator norm, spectral radius, inverse.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "radial/matrix.hpp"
#include "radial/tolerances.hpp"

namespace radial {

struct HermEig {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k pairs with values[k]
};

struct SchurForm {
  CMatrix U;  // unitary
  CMatrix T;  // upper triangular, A = U T U*
};

namespace detail {

inline void require_square(const CMatrix& a, const char* who) {
  if (!a.square())
    throw std::invalid_argument(std::string(who) + ": matrix is " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + ", expected square");
}

inline void require_finite(const CMatrix& a, const char* who) {
  for (const auto& z : a.data())
    if (!is_finite(z)) throw std::invalid_argument(std::string(who) + ": non-finite entry");
}

/// Unitary G = [[c, s], [-conj(s), c]] with c real and G [f; g] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s{};
  cplx r{};

  static Givens make(cplx f, cplx g) {
    Givens gv;
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) {
      gv.r = f;
      return gv;
    }
    if (af == 0.0) {
      gv.c = 0.0;
      gv.s = std::conj(g) / ag;
      gv.r = ag;
      return gv;
    }
    const double nrm = std::hypot(af, ag);
    const cplx phase = f / af;
    gv.c = af / nrm;
    gv.s = phase * std::conj(g) / nrm;
    gv.r = phase * nrm;
    return gv;
  }

  /// rows (i, j) <- G [row_i; row_j] over columns [c0, c1).
  void apply_rows(CMatrix& m, std::size_t i, std::size_t j, std::size_t c0, std::size_t c1) const {
    for (std::size_t k = c0; k < c1; ++k) {
      const cplx a = m(i, k), b = m(j, k);
      m(i, k) = c * a + s * b;
      m(j, k) = -std::conj(s) * a + c * b;
    }
  }

  /// columns (i, j) <- [col_i, col_j] G* over rows [r0, r1).
  void apply_cols_adjoint(CMatrix& m, std::size_t i, std::size_t j, std::size_t r0,
                          std::size_t r1) const {
    for (std::size_t k = r0; k < r1; ++k) {
      const cplx a = m(k, i), b = m(k, j);
      m(k, i) = c * a + std::conj(s) * b;
      m(k, j) = -s * a + c * b;
    }
  }
};

inline double offdiag_norm(const CMatrix& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized first; values come back ascending.
inline HermEig herm_eig(const CMatrix& input, const Tolerances& tol = default_tolerances()) {
  detail::require_square(input, "herm_eig");
  detail::require_finite(input, "herm_eig");
  const std::size_t n = input.rows();
  CMatrix h = hermitian_part(input);
  CMatrix v = CMatrix::identity(n);
  const double scale = frobenius_norm(h);

  bool converged = false;
  for (int sweep = 0; sweep <= tol.jacobi_max_sweeps; ++sweep) {
    if (detail::offdiag_norm(h) <= tol.jacobi_offdiag * scale) {
      converged = true;
      break;
    }
    if (sweep == tol.jacobi_max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx hpq = h(p, q);
        const double mag = std::abs(hpq);
        if (mag == 0.0) continue;
        const double a = h(p, p).real(), b = h(q, q).real();
        // Below roundoff relative to both diagonals: drop it.
        if (mag < 1e-18 * (std::abs(a) + std::abs(b))) {
          h(p, q) = h(q, p) = 0.0;
          continue;
        }
        const cplx phase = hpq / mag;
        const double theta = (b - a) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const cplx gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx hkp = h(k, p), hkq = h(k, q);
          h(k, p) = hkp * gpp + hkq * gqp;
          h(k, q) = hkp * gpq + hkq * gqq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx hpk = h(p, k), hqk = h(q, k);
          h(p, k) = std::conj(gpp) * hpk + std::conj(gqp) * hqk;
          h(q, k) = std::conj(gpq) * hpk + std::conj(gqq) * hqk;
        }
        h(p, q) = h(q, p) = 0.0;
        h(p, p) = a - t * mag;
        h(q, q) = b + t * mag;
      }
    }
  }
  if (!converged)
    throw numerical_error("herm_eig: Jacobi did not converge in " +
                          std::to_string(tol.jacobi_max_sweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return h(i, i).real() < h(j, j).real(); });
  HermEig out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = h(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Largest eigenvalue of a Hermitian matrix together with a unit eigenvector.
inline std::pair<double, CVector> herm_max(const CMatrix& h,
                                           const Tolerances& tol = default_tolerances()) {
  auto e = herm_eig(h, tol);
  const std::size_t last = e.values.size() - 1;
  return {e.values[last], e.vectors.column(last)};
}

/// Smallest and largest eigenvalue of a Hermitian matrix, values only.
///
/// Householder reduction to real symmetric tridiagonal form, then Sturm
/// bisection for the two ends of the spectrum. This is the inner loop of the
/// numerical-radius and support-function evaluations.
inline std::pair<double, double> herm_extremes(const CMatrix& input) {
  const std::size_t n = input.rows();
  if (n == 0) throw std::invalid_argument("herm_extremes: empty matrix");
  if (n == 1) return {input(0, 0).real(), input(0, 0).real()};
  CMatrix a = hermitian_part(input);
  CVector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    double tail = 0.0;
    for (std::size_t i = 1; i < m; ++i) tail += std::norm(a(k + 1 + i, k));
    if (tail == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const double xn = std::sqrt(tail + std::norm(x0));
    const double a0 = std::abs(x0);
    const cplx phase = a0 == 0.0 ? cplx{1.0} : x0 / a0;
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] += phase * xn;
    double vn2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) vn2 += std::norm(v[i]);
    const double beta = 2.0 / vn2;
    // Trailing block B <- H B H with H = I - beta v v*:
    // p = beta B v, w = p - (beta/2)(v* p) v, B <- B - v w* - w v*.
    for (std::size_t i = 0; i < m; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      p[i] = beta * s;
    }
    cplx vp{};
    for (std::size_t i = 0; i < m; ++i) vp += std::conj(v[i]) * p[i];
    const cplx half = 0.5 * beta * vp;
    for (std::size_t i = 0; i < m; ++i) p[i] -= half * v[i];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        a(k + 1 + i, k + 1 + j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
    a(k + 1, k) = -phase * xn;
    a(k, k + 1) = std::conj(a(k + 1, k));
    for (std::size_t i = 1; i < m; ++i) a(k + 1 + i, k) = a(k, k + 1 + i) = 0.0;
  }
  std::vector<double> d(n), e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::abs(a(i + 1, i));

  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? e[i - 1] : 0.0) + e[i];
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double pivmin = std::max(std::numeric_limits<double>::min(),
                                 std::numeric_limits<double>::epsilon() * 1e-3 * scale * scale);
  // Number of eigenvalues strictly below x.
  auto count_below = [&](double x) {
    std::size_t c = 0;
    double q = d[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++c;
    for (std::size_t i = 1; i < n; ++i) {
      q = d[i] - x - e[i - 1] * e[i - 1] / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      if (q < 0) ++c;
    }
    return c;
  };
  auto bisect = [&](std::size_t kth) {  // kth eigenvalue, 0-based ascending
    double l = lo, h = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (l + h);
      if (mid <= l || mid >= h) break;
      if (h - l <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(l), std::abs(h)))
        break;
      if (count_below(mid) > kth)
        h = mid;
      else
        l = mid;
    }
    return 0.5 * (l + h);
  };
  if (scale == 0.0) return {0.0, 0.0};
  return {bisect(0), bisect(n - 1)};
}

/// Complex Schur form A = U T U* via Householder reduction to Hessenberg
/// form followed by single-shift (Wilkinson) QR with deflation.
inline SchurForm schur(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "schur");
  detail::require_finite(a, "schur");
  const std::size_t n = a.rows();
  CMatrix t = a;
  CMatrix u = CMatrix::identity(n);
  if (n <= 1) return {u, t};

  // Hessenberg reduction.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    CVector x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = t(k + 1 + i, k);
    const double xn = norm2(x);
    if (xn == 0.0) continue;
    double tail = 0.0;
    for (std::size_t i = 1; i < m; ++i) tail += std::norm(x[i]);
    if (tail == 0.0) continue;
    const double a0 = std::abs(x[0]);
    const cplx phase = a0 == 0.0 ? cplx{1.0} : x[0] / a0;
    CVector v = x;
    v[0] += phase * xn;
    const double vn2 = std::pow(norm2(v), 2);
    // t <- H t, H = I - 2 v v* / (v* v) acting on rows k+1..n-1
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t i = 0; i < m; ++i) s += std::conj(v[i]) * t(k + 1 + i, j);
      s *= 2.0 / vn2;
      for (std::size_t i = 0; i < m; ++i) t(k + 1 + i, j) -= v[i] * s;
    }
    // t <- t H, u <- u H acting on columns k+1..n-1
    auto right = [&](CMatrix& mm) {
      for (std::size_t r = 0; r < n; ++r) {
        cplx s{};
        for (std::size_t i = 0; i < m; ++i) s += mm(r, k + 1 + i) * v[i];
        s *= 2.0 / vn2;
        for (std::size_t i = 0; i < m; ++i) mm(r, k + 1 + i) -= s * std::conj(v[i]);
      }
    };
    right(t);
    right(u);
    for (std::size_t i = k + 2; i < n; ++i) t(i, k) = 0.0;
  }

  const double absolute_floor = std::numeric_limits<double>::epsilon() * frobenius_norm(a);
  auto negligible = [&](std::size_t i) {
    const double sub = std::abs(t(i, i - 1));
    return sub <= tol.schur_deflation * (std::abs(t(i - 1, i - 1)) + std::abs(t(i, i))) ||
           sub <= absolute_floor;
  };

  const std::size_t cap = static_cast<std::size_t>(tol.schur_iterations_per_row) * n;
  std::size_t total = 0;
  std::size_t iter = 0;
  std::size_t iu = n - 1;
  while (true) {
    while (iu > 0 && negligible(iu)) {
      t(iu, iu - 1) = 0.0;
      --iu;
      iter = 0;
    }
    if (iu == 0) break;
    if (++total > cap)
      throw numerical_error("schur: QR iteration did not converge within " + std::to_string(cap) +
                            " iterations");
    ++iter;
    std::size_t il = iu - 1;
    while (il > 0 && !negligible(il)) --il;

    cplx shift;
    if (iter == 10 || iter == 30) {
      shift = std::abs(t(iu, iu - 1).real()) + (iu >= 2 ? std::abs(t(iu - 1, iu - 2).real()) : 0.0);
    } else {
      const cplx p = t(iu - 1, iu - 1), q = t(iu - 1, iu), r = t(iu, iu - 1), d = t(iu, iu);
      const cplx half_tr = 0.5 * (p + d);
      const cplx disc = std::sqrt(0.25 * (p - d) * (p - d) + q * r);
      const cplx l1 = half_tr + disc, l2 = half_tr - disc;
      shift = std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
    }

    auto g = detail::Givens::make(t(il, il) - shift, t(il + 1, il));
    g.apply_rows(t, il, il + 1, il, n);
    g.apply_cols_adjoint(t, il, il + 1, 0, std::min(il + 3, iu + 1));
    g.apply_cols_adjoint(u, il, il + 1, 0, n);
    for (std::size_t i = il + 1; i < iu; ++i) {
      g = detail::Givens::make(t(i, i - 1), t(i + 1, i - 1));
      t(i, i - 1) = g.r;
      t(i + 1, i - 1) = 0.0;
      g.apply_rows(t, i, i + 1, i, n);
      g.apply_cols_adjoint(t, i, i + 1, 0, std::min(i + 3, iu + 1));
      g.apply_cols_adjoint(u, i, i + 1, 0, n);
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) t(i, j) = 0.0;
  return {std::move(u), std::move(t)};
}

/// Exchange the diagonal entries k and k+1 of a Schur form by a unitary
/// rotation, keeping A = U T U* and T upper triangular.
inline void swap_schur_adjacent(SchurForm& s, std::size_t k) {
  const std::size_t n = s.T.rows();
  const cplx a = s.T(k, k), b = s.T(k + 1, k + 1), c = s.T(k, k + 1);
  // First column of G* is proportional to (c, b - a), the eigenvector for b.
  auto g = detail::Givens::make(c, b - a);
  g.apply_rows(s.T, k, k + 1, 0, n);
  g.apply_cols_adjoint(s.T, k, k + 1, 0, n);
  g.apply_cols_adjoint(s.U, k, k + 1, 0, n);
  s.T(k + 1, k) = 0.0;
}

inline CVector eigenvalues(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  return schur(a, tol).T.diag();
}

/// Largest singular value, sqrt(lambda_max(A* A)).
inline double op_norm(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  detail::require_finite(a, "op_norm");
  if (a.empty()) return 0.0;
  const CMatrix gram = a.rows() < a.cols() ? a * a.adjoint() : a.adjoint() * a;
  const auto e = herm_eig(gram, tol);
  return std::sqrt(std::max(0.0, e.values.back()));
}

inline double spectral_radius(const CMatrix& a, const Tolerances& tol = default_tolerances()) {
  double r = 0.0;
  for (const auto& z : eigenvalues(a, tol)) r = std::max(r, std::abs(z));
  return r;
}

/// Inverse by LU with partial pivoting; throws numerical_error when a pivot
/// vanishes.
inline CMatrix inverse(const CMatrix& a) {
  detail::require_square(a, "inverse");
  const std::size_t n = a.rows();
  CMatrix lu = a;
  CMatrix inv = CMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == cplx{}) throw numerical_error("inverse: matrix is singular");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(k, j), lu(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = lu(i, k) / lu(k, k);
      if (f == cplx{}) continue;
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < n; ++j) inv(i, j) -= f * inv(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = inv(kk, j);
      for (std::size_t m = kk + 1; m < n; ++m) s -= lu(kk, m) * inv(m, j);
      inv(kk, j) = s / lu(kk, kk);
    }
  }
  return inv;
}

inline bool is_normal(const CMatrix& a, double rel_tol, const Tolerances& tol = default_tolerances()) {
  const double na = op_norm(a, tol);
  if (na == 0.0) return true;
  const CMatrix ah = a.adjoint();
  return op_norm(ah * a - a * ah, tol) <= rel_tol * na * na;
}

}  // namespace radial
