#include <gtest/gtest.h>

#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "accretive/numerics.hpp"
#include "accretive/rng.hpp"
#include "oracles.hpp"

using namespace accretive;
using oracle::diag;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

ComplexMatrix nilpotent() {
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  return n;
}
}  // namespace

TEST(Validation, RejectsEmptyNonSquareNonFinite) {
  EXPECT_THROW(validate_matrix(ComplexMatrix(0, 0)), LabError);
  try {
    validate_matrix(ComplexMatrix::Zero(2, 3));
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSquare);
  }
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_matrix(m), LabError);
}

TEST(HermitianPart, Examples) {
  ComplexMatrix expected(2, 2);
  expected << 0.0, 0.5, 0.5, 0.0;
  EXPECT_LT((hermitian_part(nilpotent()) - expected).norm(), 1e-15);
  const ComplexMatrix h = diag({1.0, 3.0});
  EXPECT_EQ(hermitian_part(h), h);
  EXPECT_EQ(hermitian_part(I * identity(3)).norm(), 0.0);
}

TEST(HermitianPart, ExactlyHermitianOnRandomInput) {
  Rng rng(11);
  const ComplexMatrix h = hermitian_part(rng.gaussian(7, 7));
  EXPECT_EQ((h - h.adjoint()).norm(), 0.0);
}

TEST(MinEig, Examples) {
  EXPECT_NEAR(min_eig_hermitian(diag({1.0, 3.0})), 1.0, 1e-14);
  EXPECT_NEAR(min_eig_hermitian(hermitian_part(nilpotent())), -0.5, 1e-14);
  EXPECT_EQ(min_eig_hermitian(ComplexMatrix::Zero(3, 3)), 0.0);
}

TEST(MinEig, RejectsNonHermitian) {
  try {
    min_eig_hermitian(nilpotent());
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(MatrixExp, Examples) {
  EXPECT_LT((matrix_exp(ComplexMatrix::Zero(3, 3)) - identity(3)).norm(), 1e-15);
  const ComplexMatrix d = matrix_exp(diag({0.3, Complex(-1.0, 2.0)}));
  EXPECT_LT(std::abs(d(0, 0) - std::exp(Complex(0.3))), 1e-14);
  EXPECT_LT(std::abs(d(1, 1) - std::exp(Complex(-1.0, 2.0))), 1e-14);
  EXPECT_LT((matrix_exp(nilpotent()) - (identity(2) + nilpotent())).norm(), 1e-15);
}

TEST(MatrixExp, AgreesWithTaylorAndEigenOracles) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(8));
    const double scale = rng.log_uniform(1e-3, 20.0);
    const ComplexMatrix m = rng.gaussian(n, n) * (scale / std::sqrt(static_cast<double>(n)));
    const ComplexMatrix e = matrix_exp(m);
    const ComplexMatrix taylor = oracle::exp_taylor(m);
    const ComplexMatrix eig = m.exp();
    const double ref = std::max(1.0, oracle::opnorm(taylor));
    EXPECT_LT(oracle::opnorm(e - taylor) / ref, 1e-11) << "trial " << trial;
    EXPECT_LT(oracle::opnorm(e - eig) / ref, 1e-11) << "trial " << trial;
  }
}

TEST(MatrixExp, SemigroupPropertyAndInverse) {
  Rng rng(5);
  const ComplexMatrix m = rng.gaussian(5, 5);
  const ComplexMatrix e1 = matrix_exp(0.7 * m) * matrix_exp(0.3 * m);
  EXPECT_LT(oracle::opnorm(e1 - matrix_exp(m)) / oracle::opnorm(matrix_exp(m)), 1e-12);
  EXPECT_LT(oracle::opnorm(matrix_exp(m) * matrix_exp(-m) - identity(5)), 1e-11);
}

TEST(MatrixExp, OverflowIsReported) {
  try {
    matrix_exp(diag({1000.0, 0.0}));
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(Support, Examples) {
  EXPECT_NEAR(numerical_range_support(identity(3), 0.0).value, 1.0, 1e-14);
  EXPECT_NEAR(numerical_range_support(identity(3), 0.8).value, std::cos(0.8), 1e-14);
  EXPECT_NEAR(numerical_range_support(diag({1.0, std::polar(1.0, kPi / 4)}), 0.0).value, 1.0, 1e-14);
}

TEST(Support, NilpotentMatchesSamplingOracle) {
  const double value = numerical_range_support(nilpotent(), 0.0).value;
  EXPECT_NEAR(value, 0.5, 1e-14);
  const double sampled = oracle::support_by_sampling(nilpotent(), 0.0, 100000, 3);
  EXPECT_LE(sampled, value + 1e-12);
  EXPECT_GT(sampled, value - 1e-3);
}

TEST(Support, DominatesSamplesAndBoundaryPointAttainsIt) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix t = rng.gaussian(4, 4);
    const double phi = rng.uniform(-kPi, kPi);
    const SupportPoint s = numerical_range_support(t, phi);
    EXPECT_NEAR((std::polar(1.0, phi) * s.boundary_point).real(), s.value, 1e-12 * (1 + std::abs(s.value)));
    EXPECT_NEAR(s.witness.norm(), 1.0, 1e-12);
    EXPECT_LE(oracle::support_by_sampling(t, phi, 2000, trial), s.value + 1e-12);
  }
}

TEST(SectorHalfAngle, Examples) {
  const SectorMeasurement m = sector_half_angle(diag({1.0, std::polar(1.0, kPi / 4)}));
  ASSERT_FALSE(m.full_half_plane);
  EXPECT_NEAR(m.angle, kPi / 4, 1e-8);

  Rng rng(4);
  const ComplexMatrix x = rng.gaussian(5, 5);
  const SectorMeasurement psd = sector_half_angle(hermitian_part(x * x.adjoint()));
  EXPECT_FALSE(psd.full_half_plane);
  EXPECT_NEAR(psd.angle, 0.0, 1e-8);

  const SectorMeasurement edge = sector_half_angle(diag({I, 1.0}));
  EXPECT_FALSE(edge.full_half_plane);
  EXPECT_NEAR(edge.angle, kPi / 2, 1e-8);
  EXPECT_NEAR(std::abs(edge.witness - I), 0.0, 1e-8);
}

TEST(SectorHalfAngle, FullHalfPlaneSentinel) {
  const SectorMeasurement m = sector_half_angle(diag({-1.0, 1.0}));
  EXPECT_TRUE(m.full_half_plane);
  EXPECT_LT(m.witness.real(), 0.0);
}

TEST(SectorHalfAngle, InvariantUnderPositiveScalingAndUnitaryConjugation) {
  Rng rng(9);
  const ComplexMatrix d = diag({1.0, std::polar(2.0, 0.9), std::polar(0.5, -0.4)});
  const ComplexMatrix u = rng.unitary(3);
  const double a0 = sector_half_angle(d).angle;
  EXPECT_NEAR(a0, 0.9, 1e-8);
  EXPECT_NEAR(sector_half_angle(1e6 * d).angle, a0, 1e-8);
  EXPECT_NEAR(sector_half_angle(u * d * u.adjoint()).angle, a0, 1e-8);
}

TEST(SectorHalfAngle, RejectsTooFewAngles) { EXPECT_THROW(sector_half_angle(identity(2), 4), LabError); }

TEST(ResolventNorm, Examples) {
  EXPECT_NEAR(resolvent_norm(diag({1.0, 3.0}), 1.0), 0.5, 1e-14);
  EXPECT_NEAR(resolvent_norm(ComplexMatrix::Zero(2, 2), 2.0), 0.5, 1e-14);
  try {
    resolvent_norm(diag({1.0, 3.0}), -1.0);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singular);
  }
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(identity(5)), 1.0, 1e-15);
  EXPECT_NEAR(operator_norm(diag({-2.0, 1.0})), 2.0, 1e-15);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 3.0;
  EXPECT_NEAR(operator_norm(m), 3.0, 1e-15);
}

TEST(Rng, DeterministicAndSeedSensitive) {
  Rng a(42), b(42), c(43);
  for (int k = 0; k < 10; ++k) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(1, 5), derive_seed(1, 5));
}

TEST(Rng, HaarUnitaryIsUnitary) {
  Rng rng(3);
  const ComplexMatrix u = rng.unitary(6);
  EXPECT_LT((u.adjoint() * u - identity(6)).norm(), 1e-13);
}
