#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "radial/gate.hpp"
#include "radial/wnum.hpp"

using namespace radial;
using fixture::kNonnormal3;

TEST(CheckConditionC, Examples) {
  const auto fx = check_condition_c(kNonnormal3);
  EXPECT_TRUE(fx.satisfied);
  EXPECT_NEAR(std::abs(fx.mu - 1.0), 0.0, 1e-12);
  ASSERT_TRUE(fx.contraction_norm);
  EXPECT_LE(*fx.contraction_norm, 1.0 + 1e-8);
  EXPECT_EQ(fx.max_modulus_count, 1);

  const auto id = check_condition_c(CMatrix::identity(4));
  EXPECT_TRUE(id.satisfied);
  EXPECT_NEAR(std::abs(id.mu - 1.0), 0.0, 1e-14);

  const auto pm = check_condition_c(CMatrix::diagonal({1.0, -1.0}));
  EXPECT_FALSE(pm.satisfied);
  EXPECT_EQ(pm.max_modulus_count, 2);

  const auto d = check_condition_c(CMatrix::diagonal({1.0, cplx{0.4, 0.4}}));
  EXPECT_TRUE(d.satisfied);
  EXPECT_NEAR(std::abs(d.mu - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(*d.half_norm, 0.5, 1e-14);

  const auto nil = check_condition_c(CMatrix{{0.0, 1.0}, {0.0, 0.0}});
  EXPECT_FALSE(nil.satisfied);
  EXPECT_FALSE(nil.zero_matrix);
  EXPECT_FALSE(nil.diagnostics.empty());
}

TEST(CheckConditionC, ZeroMatrixIsSpecialVerdict) {
  const auto z = check_condition_c(CMatrix(3, 3));
  EXPECT_TRUE(z.zero_matrix);
  EXPECT_FALSE(z.satisfied);
  EXPECT_THROW(check_condition_c(CMatrix(2, 3)), std::invalid_argument);
}

TEST(CheckConditionC, BoundaryFlagged) {
  // ||A - I/2|| = 1/2 + 5e-7: accepted? no, above tol_gate, but flagged as boundary.
  const auto v = check_condition_c(CMatrix::diagonal({1.0, cplx{-5e-7, 0.0}}));
  EXPECT_FALSE(v.satisfied);
  EXPECT_TRUE(v.boundary);
}

TEST(CheckConditionC, SatisfiedImpliesContractInvariants) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const CMatrix a = gen_satisfying(n, seed);
    const auto v = check_condition_c(a);
    ASSERT_TRUE(v.satisfied) << seed;
    EXPECT_EQ(v.max_modulus_count, 1);
    EXPECT_LE(*v.contraction_norm, 1.0 + 1e-8);
    EXPECT_NEAR(std::abs(v.mu), spectral_radius(a), 1e-8);
    // 1 in sigma(L), L = 2A/mu - I
    const CMatrix l = a * (2.0 / v.mu) - CMatrix::identity(n);
    double gap = 1e300;
    for (const auto& z : eigenvalues(l)) gap = std::min(gap, std::abs(z - 1.0));
    EXPECT_LE(gap, 1e-7 * (1.0 + op_norm(l)));
  }
}

TEST(Decompose, FixtureCanonicalForm) {
  const auto cf = decompose_condition_d(kNonnormal3);
  EXPECT_NEAR(std::abs(cf.mu - 1.0), 0.0, 1e-12);
  EXPECT_EQ(cf.p, 1u);
  EXPECT_EQ(cf.q, 0u);
  ASSERT_EQ(cf.C.rows(), 2u);
  // C = [[1/2, 1/2], [0, 1/2]] up to a diagonal unitary
  EXPECT_NEAR(std::abs(cf.C(0, 0) - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(cf.C(1, 1) - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(cf.C(0, 1)), 0.5, 1e-10);
  EXPECT_NEAR(std::abs(cf.C(1, 0)), 0.0, 1e-10);
  EXPECT_LE(cf.residual, 1e-8 * (1.0 + op_norm(kNonnormal3)));
  EXPECT_NEAR(cf.c_inverse_re_min, 1.0, 1e-6);
  EXPECT_NEAR(cf.c_half_norm, 0.5, 1e-10);
  EXPECT_LE(op_norm(kNonnormal3 - assemble_canonical(cf)), 1e-8);
}

TEST(Decompose, VacuousAndScalarResidue) {
  const auto a = decompose_condition_d(CMatrix::diagonal({1.0, 1.0, 0.0}));
  EXPECT_EQ(a.p, 2u);
  EXPECT_EQ(a.q, 1u);
  EXPECT_TRUE(a.C.empty());
  EXPECT_TRUE(std::isinf(a.c_inverse_re_min));

  const auto b = decompose_condition_d(CMatrix::diagonal({2.0, 1.0}));
  EXPECT_NEAR(std::abs(b.mu - 2.0), 0.0, 1e-14);
  EXPECT_EQ(b.p, 1u);
  EXPECT_EQ(b.q, 0u);
  ASSERT_EQ(b.C.rows(), 1u);
  EXPECT_NEAR(std::abs(b.C(0, 0) - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(b.c_inverse_re_min, 2.0, 1e-12);
}

TEST(Decompose, RejectsGateFailure) {
  EXPECT_THROW(decompose_condition_d(CMatrix::diagonal({1.0, -1.0})), std::domain_error);
}

TEST(Decompose, RoundTripOnGeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const std::size_t n = 2 + seed % 11;
    GeneratorParams gp;
    gp.null_dim = seed % 3;
    const CMatrix a = gen_satisfying(n, 500 + seed, gp);
    const auto cf = decompose_condition_d(a);
    const CMatrix back = assemble_canonical(cf);
    EXPECT_LE(op_norm(a - back), 1e-8 * (1.0 + op_norm(a))) << seed;
    EXPECT_LE(max_abs(cf.U.adjoint() * cf.U - CMatrix::identity(n)), 1e-10);
    EXPECT_GE(cf.p, 1u);
    const auto v1 = check_condition_c(a), v2 = check_condition_c(back);
    EXPECT_EQ(v1.satisfied, v2.satisfied);
    EXPECT_NEAR(*v1.contraction_norm, *v2.contraction_norm, 1e-8);
    if (!cf.C.empty()) {
      EXPECT_LE(cf.c_half_norm, 0.5 + 1e-8);
      EXPECT_GE(cf.c_inverse_re_min, 1.0 - 1e-6);
      for (const auto& z : eigenvalues(cf.C)) {
        EXPECT_GT(std::abs(z - 1.0), 1e-7);
        EXPECT_GT(std::abs(z), 1e-7);
      }
    }
  }
}

TEST(HalfDisk, Examples) {
  const auto a = halfdisk_equiv(CMatrix{{0.5}});
  EXPECT_TRUE(a.norm_predicate);
  EXPECT_TRUE(a.inverse_predicate);
  EXPECT_NEAR(a.norm_value, 0.0, 1e-15);
  EXPECT_NEAR(a.inverse_min, 2.0, 1e-14);

  const auto b = halfdisk_equiv(CMatrix{{0.5, 0.5}, {0.0, 0.5}});
  EXPECT_TRUE(b.norm_predicate);
  EXPECT_TRUE(b.inverse_predicate);
  EXPECT_NEAR(b.norm_value, 0.5, 1e-12);
  EXPECT_NEAR(b.inverse_min, 1.0, 1e-12);
  EXPECT_TRUE(b.in_band);

  const auto c = halfdisk_equiv(CMatrix{{2.0}});
  EXPECT_FALSE(c.norm_predicate);
  EXPECT_FALSE(c.inverse_predicate);
  EXPECT_NEAR(c.norm_value, 1.5, 1e-14);
  EXPECT_NEAR(c.inverse_min, 0.5, 1e-14);

  EXPECT_THROW(halfdisk_equiv(CMatrix{{1.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
}

TEST(HalfDisk, ChainAgreesOutsideBand) {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const CMatrix c = fixture::random_invertible(1 + seed % 10, 10000 + seed);
    const auto r = halfdisk_equiv(c);
    if (r.in_band) continue;
    ++compared;
    EXPECT_EQ(r.norm_predicate, r.inverse_predicate) << seed << " " << r.norm_value << " " << r.inverse_min;
  }
  EXPECT_GT(compared, 250);
}

TEST(CheckNormal, Examples) {
  EXPECT_TRUE(check_normal(CMatrix::diagonal({1.0, 0.5})));
  EXPECT_FALSE(check_normal(CMatrix::diagonal({1.0, cplx{0.0, 0.5}})));
  EXPECT_FALSE(check_condition_c(CMatrix::diagonal({1.0, cplx{0.0, 0.5}})).satisfied);
  EXPECT_TRUE(check_normal(CMatrix::diagonal({1.0, 1.0})));
  EXPECT_TRUE(check_condition_c(CMatrix::diagonal({1.0, 1.0})).satisfied);
  EXPECT_FALSE(check_normal(CMatrix::diagonal({1.0, -1.0})));
  EXPECT_THROW(check_normal(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), std::invalid_argument);
}

TEST(CheckNormal, ConsistentWithGate) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const CMatrix a = fixture::random_normal_mixed(2 + seed % 9, 20000 + seed);
    if (fixture::normal_in_band(eigenvalues(a), 1e-6)) continue;
    EXPECT_EQ(check_normal(a), check_condition_c(a).satisfied) << seed;
  }
}

TEST(Generators, SatisfyingInstancesPassGate) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t n = 2 + seed % 11;
    const auto v = check_condition_c(gen_satisfying(n, seed));
    ASSERT_TRUE(v.satisfied) << "seed " << seed << " n " << n;
  }
}

TEST(Generators, ViolatingInstancesFailGate) {
  GeneratorParams peaks;
  peaks.kind = ViolationKind::two_peaks;
  GeneratorParams exp;
  exp.kind = ViolationKind::expansive;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const auto v1 = check_condition_c(gen_violating(n, seed, peaks));
    EXPECT_FALSE(v1.satisfied);
    EXPECT_GE(v1.max_modulus_count, 2);
    const auto v2 = check_condition_c(gen_violating(n, seed, exp));
    EXPECT_FALSE(v2.satisfied);
    EXPECT_EQ(v2.max_modulus_count, 1) << seed;
    ASSERT_TRUE(v2.contraction_norm);
    EXPECT_GE(*v2.contraction_norm, 1.2 - 1e-8) << seed;
  }
  EXPECT_THROW(gen_satisfying(1, 0), std::invalid_argument);
  EXPECT_EQ(gen_satisfying(5, 9), gen_satisfying(5, 9));
}

TEST(GateInvariants, UnitarySimilarity) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const CMatrix a = seed % 2 ? gen_satisfying(n, seed) : gen_violating(n, seed);
    const CMatrix v = rand_unitary(n, 9000 + seed);
    const auto x = check_condition_c(a), y = check_condition_c(v.adjoint() * a * v);
    EXPECT_EQ(x.satisfied, y.satisfied);
    if (x.contraction_norm && y.contraction_norm) EXPECT_NEAR(*x.contraction_norm, *y.contraction_norm, 1e-8);
  }
}

TEST(GateInvariants, DirectSumWithZero) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const CMatrix ap = seed % 2 ? gen_satisfying(n, seed) : gen_violating(n, seed);
    const CMatrix a = direct_sum(ap, CMatrix(1 + seed % 3, 1 + seed % 3));
    EXPECT_EQ(check_condition_c(a).satisfied, check_condition_c(ap).satisfied) << seed;
  }
}

TEST(GateInvariants, ScalingCovariance) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + seed % 6;
    const CMatrix a = seed % 2 ? gen_satisfying(n, seed) : gen_violating(n, seed);
    Rng rng(seed);
    const cplx c = rng.uniform(0.3, 3.0) * rng.unit_phase();
    const auto x = check_condition_c(a), y = check_condition_c(a * c);
    EXPECT_EQ(x.satisfied, y.satisfied);
    if (x.max_modulus_count == 1) EXPECT_NEAR(std::abs(y.mu - c * x.mu), 0.0, 1e-8);
  }
}
