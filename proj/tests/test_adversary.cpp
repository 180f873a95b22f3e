#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "radial/adversary.hpp"
#include "radial/io.hpp"

using namespace radial;
using fixture::kNonnormal3;

namespace {

const double kS = 1.0 / std::sqrt(2.0);
const CMatrix kFlip = CMatrix::diagonal({1.0, -1.0});
const CMatrix kNil{{0.0, 1.0}, {0.0, 0.0}};

// Dense grid over x = (cos a, e^{ib} sin a), y = (cos c, e^{id} sin c), the
// global phases being irrelevant to the ratio.
double grid_max_ratio(const CMatrix& a, double r_a, int steps) {
  double best = 0.0;
  const double half_pi = std::numbers::pi / 2.0, two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j < steps; ++j)
      for (int k = 0; k <= steps; ++k)
        for (int l = 0; l < steps; ++l) {
          const double ta = half_pi * i / steps, tb = two_pi * j / steps;
          const double tc = half_pi * k / steps, td = two_pi * l / steps;
          const CVector x{std::cos(ta), std::polar(std::sin(ta), tb)};
          const CVector y{std::cos(tc), std::polar(std::sin(tc), td)};
          const double num = std::abs(inner(a * x, y));
          const double den = 0.5 * r_a * (1.0 + std::abs(inner(x, y)));
          best = std::max(best, num / den);
        }
  return best;
}

}  // namespace

TEST(RankOneRatio, Examples) {
  EXPECT_NEAR(rank_one_ratio(kFlip, CVector{kS, kS}, CVector{kS, -kS}), 2.0, 1e-12);
  const CVector x{kS, cplx{0.0, kS}};
  EXPECT_NEAR(rank_one_ratio(CMatrix::identity(2), x, x), 1.0, 1e-12);
  EXPECT_NEAR(rank_one_ratio(kNil, CVector{0.0, 1.0}, CVector{1.0, 0.0}), 4.0, 1e-12);

  // the closed form equals the generic path on the assembled B
  const auto e = evaluate_ratio(kFlip, outer(CVector{kS, kS}, CVector{kS, -kS}));
  EXPECT_NEAR(e.ratio, 2.0, 1e-9);
}

TEST(RankOneRatio, Errors) {
  EXPECT_THROW(rank_one_ratio(kFlip, CVector{1.0, 1.0}, CVector{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(rank_one_ratio(kFlip, CVector{0.0, 0.0}, CVector{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(rank_one_ratio(CMatrix(2, 2), CVector{1.0, 0.0}, CVector{1.0, 0.0}), std::invalid_argument);
}

TEST(RankOneRatio, PhaseInvariance) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.index(6);
    const CMatrix a = rng.ginibre(n, n);
    const double r_a = numerical_radius(a);
    const CVector x = rng.unit_vector(n), y = rng.unit_vector(n);
    const cplx px = rng.unit_phase(), py = rng.unit_phase();
    CVector xp = x, yp = y;
    for (auto& v : xp) v *= px;
    for (auto& v : yp) v *= py;
    const double base = rank_one_ratio(a, x, y, r_a);
    EXPECT_NEAR(rank_one_ratio(a, xp, yp, r_a), base, 1e-14 * (1.0 + base));
  }
}

TEST(RankOneRatio, TransplantInvariance) {
  Rng rng(4);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + rng.index(7);
    const CMatrix a = rng.ginibre(n, n);
    const CMatrix v = haar_unitary(rng, n);
    const CVector x = rng.unit_vector(n), y = rng.unit_vector(n);
    const CMatrix vs = v.adjoint();
    EXPECT_NEAR(rank_one_ratio(vs * a * v, vs * x, vs * y), rank_one_ratio(a, x, y), 1e-10);
  }
}

TEST(AttackRankOne, FlipReachesOracleOptimum) {
  const double oracle = grid_max_ratio(kFlip, 1.0, 24);
  EXPECT_NEAR(oracle, 2.0, 1e-12);  // attained on the grid at a = c = pi/4
  const auto w = attack_rank_one(kFlip);
  EXPECT_GE(w.ratio, 2.0 - 1e-6);
  EXPECT_LE(w.ratio, oracle + 1e-9);
  EXPECT_EQ(w.log.restarts, default_rank_one_budget.restarts);
  EXPECT_EQ(w.x.size(), 2u);
}

TEST(AttackRankOne, NilpotentOracle) {
  const double oracle = grid_max_ratio(kNil, 0.5, 24);
  const auto w = attack_rank_one(kNil);
  EXPECT_GE(w.ratio, oracle - 1e-6);
  EXPECT_NEAR(w.ratio, 4.0, 1e-6);
}

TEST(AttackRankOne, FixtureNeverExceedsOne) {
  const auto w = attack_rank_one(kNonnormal3, default_rank_one_budget.scaled(4), 11);
  EXPECT_LE(w.ratio, 1.0 + 1e-8);
  EXPECT_GE(w.ratio, 1.0 - 1e-6);
}

TEST(AttackRankOne, DeterministicUnderSeed) {
  const CMatrix a = gen_violating(5, 3);
  const auto w1 = attack_rank_one(a, {8, 100}, 99), w2 = attack_rank_one(a, {8, 100}, 99);
  EXPECT_EQ(w1.ratio, w2.ratio);
  EXPECT_EQ(w1.x, w2.x);
  EXPECT_EQ(w1.y, w2.y);
  EXPECT_EQ(w1.log.best_restart, w2.log.best_restart);
}

TEST(AttackRankOne, ExpansiveViolatorsFound) {
  GeneratorParams gp;
  gp.kind = ViolationKind::expansive;
  int found = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const CMatrix a = gen_violating(2 + seed % 7, 400 + seed, gp);
    const auto w = attack_rank_one(a, default_rank_one_budget, seed);
    ++total;
    if (w.ratio > 1.0 + 1e-6) ++found;
  }
  EXPECT_GE(found, static_cast<int>(0.95 * total));
}

TEST(AttackRankOne, SatisfyingInstancesBounded) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const CMatrix a = gen_satisfying(2 + seed % 9, 600 + seed);
    EXPECT_LE(attack_rank_one(a, default_rank_one_budget, seed).ratio, 1.0 + 1e-8) << seed;
  }
}

TEST(Probe, Examples) {
  const CMatrix id = CMatrix::identity(3);
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const CVector x = rng.unit_vector(3);
    EXPECT_NEAR(probe_slack(id, x, x, rng.uniform()), 0.0, 1e-14);
  }

  for (int k = 0; k < 20; ++k) {
    const CMatrix kc = random_contraction(rng, 3);
    const CMatrix t = (id + kc) * 0.5;  // ||T - I/2|| <= 1/2
    const CVector x = rng.unit_vector(3), y = rng.unit_vector(3);
    for (int i = 0; i <= 50; ++i) EXPECT_GE(probe_slack(t, x, y, i / 50.0), -1e-8);
  }

  const CMatrix big{{1.5}};
  const CVector one{1.0};
  double worst = 1.0;
  for (int i = 1; i <= 100; ++i) worst = std::min(worst, probe_slack(big, one, one, 1e-3 * i));
  EXPECT_LT(worst, 0.0);
  EXPECT_THROW(probe_slack(big, one, one, 1.5), std::invalid_argument);
}

TEST(Probe, ReductionAndEmbedding) {
  const auto red = reduce_at(kNonnormal3, 1.0);
  EXPECT_EQ(red.T.rows(), 2u);
  // A = Q([mu] + T)Q*
  EXPECT_LE(op_norm(kNonnormal3 - red.Q * direct_sum(CMatrix{{red.mu}}, red.T) * red.Q.adjoint()), 1e-12);
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const CVector x = rng.unit_vector(2), y = rng.unit_vector(2);
    const double t = rng.uniform();
    EXPECT_GE(probe_family(red, x, y, t), -1e-8);
    // slack < 0 exactly when the embedded rank-one probe violates the inequality
    const auto [u, v] = probe_vectors(red.Q, x, y, t);
    const double ratio = rank_one_ratio(kNonnormal3, u, v);
    const double slack = probe_family(red, x, y, t);
    EXPECT_NEAR(ratio, std::abs(1.0 - t + t * inner(red.T * x, y)) / (0.5 * (1.0 + std::abs(1.0 - t + t * inner(x, y)))),
                1e-10);
    EXPECT_EQ(slack < -1e-12, ratio > 1.0 + 1e-12);
  }
  EXPECT_THROW(reduce_at(kNonnormal3, 3.0), numerical_error);
}

TEST(AttackGeneral, Examples) {
  const auto wi = attack_general(CMatrix::identity(3), {2, 30}, 1);
  EXPECT_NEAR(wi.ratio, 1.0, 1e-8);
  const auto wf = attack_general(kFlip, {2, 30}, 1);
  EXPECT_GE(wf.ratio, 2.0 - 1e-6);
  EXPECT_EQ(wf.kind, WitnessKind::general);
}

TEST(AttackGeneral, SatisfyingInstancesBounded) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CMatrix a = gen_satisfying(2 + seed % 5, 800 + seed);
    const auto w1 = attack_rank_one(a, {4, 100}, seed);
    const auto wg = attack_general(a, {1, 30}, seed, default_tolerances(), &w1);
    EXPECT_LE(wg.ratio, 1.0 + 1e-8) << seed;
    EXPECT_LE(w1.ratio, 1.0 + 1e-8) << seed;
  }
}

TEST(AttackGeneral, RankOneFindsWhatGeneralFinds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const CMatrix a = gen_violating(2 + seed % 5, 1200 + seed);
    const auto weak = attack_rank_one(a, {1, 20}, seed);
    const auto wg = attack_general(a, {2, 60}, seed, default_tolerances(), &weak);
    if (wg.ratio <= 1.0 + 1e-6) continue;
    const auto strong = attack_rank_one(a, default_rank_one_budget.scaled(4), seed + 1);
    EXPECT_GT(strong.ratio, 1.0 + 1e-6) << seed;
  }
}

TEST(Witness, SerializedRoundTripReverifies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix a = gen_violating(2 + seed % 6, 50 + seed);
    const auto w = attack_rank_one(a, {10, 200}, seed);
    const auto back = io::witness_from_json(io::parse(io::to_json(w).dump()));
    EXPECT_EQ(back.kind, w.kind);
    EXPECT_EQ(back.log.seed, w.log.seed);
    EXPECT_NEAR(reverify_witness(a, back).ratio, w.ratio, 1e-8);
    EXPECT_NEAR(back.ratio, w.ratio, 0.0);
  }
}
