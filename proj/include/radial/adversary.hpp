#pragma once

// Witness search for rho(AB) > r(A) r(B).
//
// For B = x (x) y with unit x, y: rho(AB) = |(Ax, y)| and
// r(B) = (1 + |(x, y)|) / 2, so the ratio has a closed form and can be
// pushed up by projected gradient ascent on the product of spheres.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radial/gate.hpp"
#include "radial/matcore.hpp"
#include "radial/matrix.hpp"
#include "radial/random.hpp"
#include "radial/tolerances.hpp"
#include "radial/wnum.hpp"

namespace radial {

enum class WitnessKind { rank_one, general, probe };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::rank_one: return "rank_one";
    case WitnessKind::general: return "general";
    case WitnessKind::probe: return "probe";
  }
  return "?";
}

struct SearchBudget {
  std::size_t restarts = 50;
  std::size_t iterations = 500;

  SearchBudget scaled(std::size_t factor) const { return {restarts * factor, iterations}; }
};

inline constexpr SearchBudget default_rank_one_budget{50, 500};
inline constexpr SearchBudget default_general_budget{4, 150};

struct SearchLog {
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  std::size_t iterations = 0;   // total ascent / hill-climb steps over all restarts
  std::size_t evaluations = 0;  // objective evaluations
  std::size_t best_restart = 0;
  bool budget_exhausted = false;  // some restart stopped on the iteration cap rather than converging
  double search_ratio = 0.0;      // best ratio as seen by the search objective
};

struct Witness {
  WitnessKind kind = WitnessKind::rank_one;
  CMatrix B;
  CVector x, y;  // rank-one factors (B = x y*), empty for general witnesses
  double ratio = 0.0;
  double rho_ab = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;
  SearchLog log;
};

/// rho(AB), r(A), r(B) and their ratio for an explicit B.
struct RatioEvaluation {
  double rho_ab = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;
  double ratio = 0.0;
};

inline RatioEvaluation evaluate_ratio(const CMatrix& a, const CMatrix& b, std::optional<double> r_a = {},
                                      const Tolerances& tol = default_tolerances()) {
  RatioEvaluation e;
  e.r_a = r_a ? *r_a : numerical_radius(a, tol);
  e.r_b = numerical_radius(b, tol);
  e.rho_ab = spectral_radius(a * b, tol);
  const double den = e.r_a * e.r_b;
  e.ratio = den > 0.0 ? e.rho_ab / den : (e.rho_ab > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return e;
}

namespace detail {

inline void require_unit(std::span<const cplx> v, const char* who) {
  const double n = norm2(v);
  if (n == 0.0) throw std::invalid_argument(std::string(who) + ": zero vector");
  if (std::abs(n - 1.0) > 1e-12) throw std::invalid_argument(std::string(who) + ": vector is not unit length");
}

/// |(Ax, y)| / (1 + |(x, y)|); ratio = 2 * value / r(A).
inline double rank_one_objective(const CMatrix& a, std::span<const cplx> x, std::span<const cplx> y) {
  return std::abs(inner(a * x, y)) / (1.0 + std::abs(inner(x, y)));
}

}  // namespace detail

/// rho(A x(x)y) / (r(A) r(x(x)y)) = 2 |(Ax, y)| / (r(A) (1 + |(x, y)|)).
inline double rank_one_ratio(const CMatrix& a, std::span<const cplx> x, std::span<const cplx> y, double r_a) {
  detail::require_unit(x, "rank_one_ratio");
  detail::require_unit(y, "rank_one_ratio");
  if (r_a <= 0.0) throw std::invalid_argument("rank_one_ratio: r(A) = 0");
  return 2.0 * detail::rank_one_objective(a, x, y) / r_a;
}

inline double rank_one_ratio(const CMatrix& a, std::span<const cplx> x, std::span<const cplx> y,
                             const Tolerances& tol = default_tolerances()) {
  return rank_one_ratio(a, x, y, numerical_radius(a, tol));
}

// ---------------------------------------------------------------------------
// Structured probes u = (sqrt(1-t), sqrt(t) x), v = (sqrt(1-t), sqrt(t) y)
// against A = Q ([mu] + T) Q*.

/// A = Q ([mu] + T) Q* with Q unitary.
struct Reduction {
  cplx mu{};
  CMatrix T;
  CMatrix Q;
};

/// Split off the eigenvalue mu as an orthogonal direct summand. Throws
/// numerical_error when mu is not an eigenvalue or its Schur row does not
/// decouple (the reduction is unavailable).
inline Reduction reduce_at(const CMatrix& a, cplx mu, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "reduce_at");
  const double na = op_norm(a, tol);
  const double tc = tol.cluster * (1.0 + na);
  SchurForm s = schur(a, tol);
  const std::size_t n = a.rows();
  std::size_t at = n;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(s.T(j, j) - mu) <= tc && (at == n || std::abs(s.T(j, j) - mu) < std::abs(s.T(at, at) - mu)))
      at = j;
  if (at == n) throw numerical_error("reduce_at: mu is not an eigenvalue of A");
  for (std::size_t k = at; k > 0; --k) swap_schur_adjacent(s, k - 1);
  double coupling = 0.0;
  for (std::size_t j = 1; j < n; ++j) coupling = std::max(coupling, std::abs(s.T(0, j)));
  if (coupling > tol.split * (1.0 + na))
    throw numerical_error("reduce_at: reduction unavailable, coupling " + detail::fmt(coupling));
  return {mu, s.T.block(1, 1, n - 1, n - 1), std::move(s.U)};
}

/// Slack (1 + |1 - t + t(x, y)|)/2 - |1 - t + t(Tx, y)| for a block T
/// already normalized by mu; negative slack certifies a violation.
inline double probe_slack(const CMatrix& t_block, std::span<const cplx> x, std::span<const cplx> y, double t) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("probe_slack: t must lie in [0, 1]");
  detail::require_unit(x, "probe_slack");
  detail::require_unit(y, "probe_slack");
  const cplx txy = inner(t_block * x, y);
  const cplx xy = inner(x, y);
  return 0.5 * (1.0 + std::abs(1.0 - t + t * xy)) - std::abs(1.0 - t + t * txy);
}

inline double probe_family(const Reduction& red, std::span<const cplx> x, std::span<const cplx> y, double t) {
  if (red.mu == cplx{}) throw std::invalid_argument("probe_family: reduction with mu = 0");
  return probe_slack(red.T / red.mu, x, y, t);
}

/// Embed a complement pair (x, y) into the probe vectors (u, v) in the
/// coordinates of A.
inline std::pair<CVector, CVector> probe_vectors(const CMatrix& q, std::span<const cplx> x,
                                                 std::span<const cplx> y, double t) {
  const std::size_t n = q.rows();
  CVector ul(n), vl(n);
  ul[0] = vl[0] = std::sqrt(1.0 - t);
  for (std::size_t i = 1; i < n; ++i) {
    ul[i] = std::sqrt(t) * x[i - 1];
    vl[i] = std::sqrt(t) * y[i - 1];
  }
  return {q * ul, q * vl};
}

namespace detail {

/// Probe warm start from the Schur form with the dominant eigenvalue first:
/// x, y = top singular pair of T/mu - I/2, t on a log grid in [1e-3, 1e-1].
/// The first Schur row need not vanish; the probe is then only a heuristic
/// start, and its ratio is evaluated exactly.
inline std::optional<std::pair<CVector, CVector>> probe_warm_start(const CMatrix& a, double r_a,
                                                                   const Tolerances& tol) {
  const std::size_t n = a.rows();
  if (n < 2) return std::nullopt;
  SchurForm s = schur(a, tol);
  std::size_t lead = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(s.T(j, j)) > std::abs(s.T(lead, lead))) lead = j;
  for (std::size_t k = lead; k > 0; --k) swap_schur_adjacent(s, k - 1);
  const cplx mu = s.T(0, 0);
  if (mu == cplx{}) return std::nullopt;
  const CMatrix m = s.T.block(1, 1, n - 1, n - 1) / mu - CMatrix::identity(n - 1) * 0.5;
  const auto [top, xs] = herm_max(m.adjoint() * m, tol);
  (void)top;
  CVector ys = m * xs;
  if (norm2(ys) == 0.0) return std::nullopt;
  ys = normalized(ys);
  double best = -1.0;
  std::pair<CVector, CVector> out;
  for (int i = 0; i < 20; ++i) {
    const double t = std::pow(10.0, -3.0 + 2.0 * i / 19.0);
    auto [u, v] = probe_vectors(s.U, xs, ys, t);
    u = normalized(u);
    v = normalized(v);
    const double r = 2.0 * rank_one_objective(a, u, v) / r_a;
    if (r > best) {
      best = r;
      out = {std::move(u), std::move(v)};
    }
  }
  return out;
}

struct AscentResult {
  CVector x, y;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool capped = false;
};

/// Projected gradient ascent of |(Ax, y)| / (1 + |(x, y)|) on the product of
/// unit spheres, with step doubling on success and halving on failure.
inline AscentResult ascend_rank_one(const CMatrix& a, const CMatrix& a_adj, CVector x, CVector y,
                                    std::size_t max_iter) {
  AscentResult res;
  const std::size_t n = x.size();
  auto objective = [&](const CVector& xx, const CVector& yy) {
    ++res.evaluations;
    return rank_one_objective(a, xx, yy);
  };
  double f = objective(x, y);
  double eta = 0.5;
  CVector gx(n), gy(n), xt(n), yt(n);
  bool converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    ++res.iterations;
    const CVector ax = a * x;
    const CVector ay = a_adj * y;
    const cplx g = inner(ax, y);
    const cplx h = inner(x, y);
    const double ng = std::abs(g), nh = std::abs(h);
    const cplx pg = ng > 0.0 ? g / ng : cplx{1.0};
    const double den = 1.0 + nh;
    for (std::size_t i = 0; i < n; ++i) {
      // grad_x |g| = (g/|g|) A* y, grad_y |g| = conj(g/|g|) A x,
      // grad_x |h| = (h/|h|) y,    grad_y |h| = conj(h/|h|) x.
      const cplx dnx = pg * ay[i], dny = std::conj(pg) * ax[i];
      const cplx ddx = nh > 0.0 ? (h / nh) * y[i] : cplx{};
      const cplx ddy = nh > 0.0 ? std::conj(h / nh) * x[i] : cplx{};
      gx[i] = (den * dnx - ng * ddx) / (den * den);
      gy[i] = (den * dny - ng * ddy) / (den * den);
    }
    const double px = inner(gx, x).real(), py = inner(gy, y).real();
    for (std::size_t i = 0; i < n; ++i) {
      gx[i] -= px * x[i];
      gy[i] -= py * y[i];
    }
    const double gn = std::sqrt(std::pow(norm2(gx), 2) + std::pow(norm2(gy), 2));
    if (gn < 1e-13 * (1.0 + f)) {
      converged = true;
      break;
    }
    bool moved = false;
    while (eta > 1e-14) {
      for (std::size_t i = 0; i < n; ++i) {
        xt[i] = x[i] + eta * gx[i];
        yt[i] = y[i] + eta * gy[i];
      }
      xt = normalized(std::move(xt));
      yt = normalized(std::move(yt));
      const double ft = objective(xt, yt);
      if (ft > f) {
        std::swap(x, xt);
        std::swap(y, yt);
        xt.assign(n, cplx{});
        yt.assign(n, cplx{});
        f = ft;
        eta = std::min(2.0 * eta, 4.0);
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) {
      converged = true;
      break;
    }
  }
  res.capped = !converged;
  res.x = std::move(x);
  res.y = std::move(y);
  res.value = f;
  return res;
}

}  // namespace detail

/// Multi-start search for a rank-one B maximizing rho(AB) / (r(A) r(B)).
///
/// Restart 0 starts from the structured probe, restart 1 from the top
/// singular pair, the rest from seeded uniform points on the spheres (y
/// alternating between random and Ax/|Ax|). The best restart wins, the
/// lowest index on ties. The returned ratio is recomputed through the
/// generic spectral-radius / numerical-radius path.
inline Witness attack_rank_one(const CMatrix& a, SearchBudget budget = default_rank_one_budget,
                               std::uint64_t seed = 0, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "attack_rank_one");
  const std::size_t n = a.rows();
  const double r_a = numerical_radius(a, tol);
  if (r_a == 0.0) throw std::invalid_argument("attack_rank_one: A = 0");
  const CMatrix a_adj = a.adjoint();

  Witness best;
  best.log.seed = seed;
  double best_value = -1.0;
  const auto warm = detail::probe_warm_start(a, r_a, tol);

  for (std::size_t r = 0; r < budget.restarts; ++r) {
    Rng rng(child_seed(seed, r));
    CVector x, y;
    WitnessKind kind = WitnessKind::rank_one;
    if (r == 0 && warm) {
      x = warm->first;
      y = warm->second;
      kind = WitnessKind::probe;
    } else if (r == 1) {
      const auto [top, v] = herm_max(a_adj * a, tol);
      (void)top;
      x = v;
      const CVector ax = a * x;
      y = norm2(ax) > 0.0 ? normalized(ax) : rng.unit_vector(n);
    } else {
      x = rng.unit_vector(n);
      const CVector ax = a * x;
      y = (r % 2 == 1 && norm2(ax) > 0.0) ? normalized(ax) : rng.unit_vector(n);
    }
    auto res = detail::ascend_rank_one(a, a_adj, std::move(x), std::move(y), budget.iterations);
    best.log.iterations += res.iterations;
    best.log.evaluations += res.evaluations;
    best.log.budget_exhausted = best.log.budget_exhausted || res.capped;
    ++best.log.restarts;
    if (res.value > best_value) {
      best_value = res.value;
      best.kind = kind;
      best.x = std::move(res.x);
      best.y = std::move(res.y);
      best.log.best_restart = r;
    }
  }
  if (best.x.empty()) throw std::invalid_argument("attack_rank_one: empty budget");
  best.log.search_ratio = 2.0 * best_value / r_a;
  best.B = outer(best.x, best.y);
  const auto e = evaluate_ratio(a, best.B, r_a, tol);
  best.ratio = e.ratio;
  best.rho_ab = e.rho_ab;
  best.r_a = e.r_a;
  best.r_b = e.r_b;
  return best;
}

/// Coordinate-perturbation hill climbing over general B, seeded by the
/// rank-one optimum (restart 0; reused from `rank_one_start` when given,
/// otherwise searched with the default rank-one budget) and Ginibre samples
/// (the rest). B is kept
/// at unit operator norm; the ratio is scale invariant in B.
inline Witness attack_general(const CMatrix& a, SearchBudget budget = default_general_budget,
                              std::uint64_t seed = 0, const Tolerances& tol = default_tolerances(),
                              const Witness* rank_one_start = nullptr) {
  detail::require_square(a, "attack_general");
  const std::size_t n = a.rows();
  const double r_a = numerical_radius(a, tol);
  if (r_a == 0.0) throw std::invalid_argument("attack_general: A = 0");

  Witness best;
  best.kind = WitnessKind::general;
  best.log.seed = seed;
  double best_ratio = -1.0;
  auto ratio_of = [&](const CMatrix& b) {
    ++best.log.evaluations;
    return evaluate_ratio(a, b, r_a, tol).ratio;
  };
  auto unit_norm = [&](CMatrix b) {
    const double nb = op_norm(b, tol);
    return nb > 0.0 ? b / nb : b;
  };

  for (std::size_t r = 0; r < budget.restarts; ++r) {
    Rng rng(child_seed(seed, 0x5eed0000ULL + r));
    CMatrix b;
    if (r == 0 && rank_one_start) {
      b = rank_one_start->B;
    } else if (r == 0) {
      const Witness w1 = attack_rank_one(a, default_rank_one_budget, seed, tol);
      b = w1.B;
      best.log.evaluations += w1.log.evaluations;
    } else {
      b = rng.ginibre(n, n);
    }
    b = unit_norm(std::move(b));
    double f = ratio_of(b);
    double step = 0.3;
    for (std::size_t it = 0; it < budget.iterations; ++it) {
      ++best.log.iterations;
      CMatrix trial = b;
      trial(rng.index(n), rng.index(n)) += step * rng.complex_normal();
      trial = unit_norm(std::move(trial));
      const double ft = ratio_of(trial);
      if (ft > f) {
        b = std::move(trial);
        f = ft;
        step = std::min(1.0, step * 1.5);
      } else {
        step = std::max(1e-6, step * 0.8);
      }
    }
    best.log.budget_exhausted = true;
    ++best.log.restarts;
    if (f > best_ratio) {
      best_ratio = f;
      best.B = b;
      best.log.best_restart = r;
    }
  }
  if (best.B.empty()) throw std::invalid_argument("attack_general: empty budget");
  best.log.search_ratio = best_ratio;
  const auto e = evaluate_ratio(a, best.B, r_a, tol);
  best.ratio = e.ratio;
  best.rho_ab = e.rho_ab;
  best.r_a = e.r_a;
  best.r_b = e.r_b;
  return best;
}

/// Recompute rho(AB), r(A), r(B) for a stored witness.
inline RatioEvaluation reverify_witness(const CMatrix& a, const Witness& w,
                                        const Tolerances& tol = default_tolerances()) {
  const CMatrix b = w.B.empty() ? outer(w.x, w.y) : w.B;
  return evaluate_ratio(a, b, std::nullopt, tol);
}

}  // namespace radial
