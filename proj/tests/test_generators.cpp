#include <gtest/gtest.h>

#include "accretive/generators.hpp"
#include "oracles.hpp"

using namespace accretive;

TEST(Generators, ScalarMultipleHasInverseGamma) {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL, 123456789ULL}) {
    GeneratorParams gp;
    gp.gamma = 0.1;
    const OptimalConstant b = compute_b(generate_pair(PairFamily::ScalarMultiple, 5, gp, seed));
    ASSERT_EQ(b.kind, BKind::Finite);
    EXPECT_NEAR(b.value, 10.0, 1e-8 * 10.0);
  }
  GeneratorParams big;
  big.gamma = 2.0;
  const OptimalConstant half = compute_b(generate_pair(PairFamily::ScalarMultiple, 4, big, 5));
  EXPECT_NEAR(half.value, 0.5, 1e-9);
  EXPECT_FALSE(half.sectorial());
}

TEST(Generators, DiagonalMatchesClosedForm) {
  for (int seed = 0; seed < 20; ++seed) {
    GeneratorParams gp;
    gp.target_b = 0.3 + 0.7 * seed;
    const OperatorPair p = generate_pair(PairFamily::Diagonal, 1 + seed % 6, gp, static_cast<std::uint64_t>(seed));
    EXPECT_NEAR(oracle::b_diagonal(p.T.diagonal(), p.A.diagonal()), gp.target_b, 1e-12 * gp.target_b);
    EXPECT_NEAR(compute_b(p).value, gp.target_b, 1e-8 * gp.target_b);
  }
}

TEST(Generators, DiagonalDimOneUnitPair) {
  // A 1x1 pair T = (1), A = (1) has b = Re(1 * 1) / 1 = 1.
  const OperatorPair p{ComplexMatrix::Ones(1, 1), ComplexMatrix::Ones(1, 1), PairFamily::Diagonal, std::nullopt};
  EXPECT_NEAR(compute_b(p).value, 1.0, 1e-14);
}

TEST(Generators, RotatedPreservesB) {
  for (int seed = 0; seed < 10; ++seed) {
    GeneratorParams gp;
    gp.target_b = 4.0;
    EXPECT_NEAR(compute_b(generate_pair(PairFamily::Rotated, 5, gp, static_cast<std::uint64_t>(seed))).value, 4.0,
                4e-8);
  }
}

TEST(Generators, Deterministic) {
  GeneratorParams gp;
  const OperatorPair a = generate_pair(PairFamily::Rotated, 6, gp, 42);
  const OperatorPair b = generate_pair(PairFamily::Rotated, 6, gp, 42);
  const OperatorPair c = generate_pair(PairFamily::Rotated, 6, gp, 43);
  EXPECT_EQ(a.T, b.T);
  EXPECT_EQ(a.A, b.A);
  EXPECT_NE(a.T, c.T);
}

TEST(Generators, AdversarialFailsCondition) {
  const OperatorPair p = generate_pair(PairFamily::Adversarial, 3, {}, 8);
  EXPECT_EQ(compute_b(p).kind, BKind::ConditionFails);
}

TEST(Generators, ParamsAndFamilies) {
  EXPECT_EQ(parse_family("scalar-multiple"), PairFamily::ScalarMultiple);
  EXPECT_THROW(parse_family("nonsense"), LabError);
  const GeneratorParams gp = GeneratorParams::from_map({{"b", 3.0}, {"gamma", 0.2}});
  EXPECT_EQ(gp.target_b, 3.0);
  EXPECT_EQ(gp.gamma, 0.2);
  EXPECT_THROW(GeneratorParams::from_map({{"zzz", 1.0}}), LabError);
  EXPECT_THROW(generate_pair(PairFamily::User, 2, {}, 0), LabError);
  EXPECT_THROW(generate_pair(PairFamily::Diagonal, 0, {}, 0), LabError);
}
