#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "agds/errors.hpp"
#include "agds/material_law.hpp"
#include "agds/models/gk.hpp"
#include "support.hpp"

namespace agds {
namespace {

std::vector<Complex> random_ball_points(int count, double rho0, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = 0.5 / rho0;
  std::vector<Complex> out;
  while (static_cast<int>(out.size()) < count) {
    Complex z(2.0 * r * u(rng), r * (2.0 * u(rng) - 1.0));
    if (std::abs(z - r) < 0.95 * r && std::abs(z) > 1e-3 * r) out.push_back(z);
  }
  return out;
}

TEST(FrequencySample, BallValidation) {
  EXPECT_NO_THROW(frequency_sample({0.5, 0.1}, 1.0));
  EXPECT_THROW(frequency_sample({1.2, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(frequency_sample({0.0, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(laplace_sample({0.5, 3.0}, 1.0), ValidationError);
  FrequencySample s = laplace_sample({2.0, 3.0}, 1.0);
  EXPECT_NEAR(std::abs(s.s() - Complex(2.0, 3.0)), 0.0, 1e-15);
}

TEST(Eval, AffineIsM0PlusZM1) {
  std::mt19937 rng(1);
  Mat m0 = testing::random_mat(3, 3, rng), m1 = testing::random_mat(3, 3, rng);
  MaterialLaw law = MaterialLaw::affine(testing::sparse(m0), testing::sparse(m1));
  const Complex z(0.3, 0.2);
  CMat expected = m0.cast<Complex>() + z * m1.cast<Complex>();
  EXPECT_LE((CMat(eval(law, frequency_sample(z, 1.0))) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Eval, MohsenWithoutRelaxationIsSenior) {
  MaterialLaw mohsen = MaterialLaw::mohsen(2.0, 0.0, 0.5, 3.0);
  MaterialLaw senior = MaterialLaw::senior(2.0, 0.5, 3.0);
  double worst = 0.0;
  for (Complex z : random_ball_points(20, 1.0, 7)) {
    worst = std::max(worst, std::abs(mohsen.impedance(z) - senior.impedance(z)) / std::abs(senior.impedance(z)));
    worst = std::max(worst, std::abs(mohsen.scalar_value(z) - senior.scalar_value(z)) / std::abs(senior.scalar_value(z)));
  }
  EXPECT_LE(worst, 1e-13);
}

TEST(Eval, EddyImpedanceAtRealFrequency) {
  const double mu = 2.0, sigma = 0.5, rho = 3.0;
  MaterialLaw eddy = MaterialLaw::eddy_fractional(mu, sigma);
  const Complex z = 1.0 / rho;
  const double expected = std::sqrt(mu / sigma) / std::sqrt(rho);
  EXPECT_NEAR(std::abs(eddy.impedance(z) - expected), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(eddy.scalar_value(z) - z / expected), 0.0, 1e-12);
}

TEST(Eval, BranchCutIsAnError) {
  EXPECT_THROW(principal_sqrt(Complex(-1.0, 0.0)), BranchCutError);
  EXPECT_NO_THROW(principal_sqrt(Complex(-1.0, 1e-3)));
  MaterialLaw m = MaterialLaw::mohsen(0.0, 1.0, 1.0, 0.0);
  EXPECT_THROW(eval_at(m, Complex(-0.5, 0.0)), BranchCutError);
}

TEST(Eval, FamilyParameterRanges) {
  EXPECT_THROW(MaterialLaw::mohsen(0.0, 0.0, 1.0, 1.0), ValidationError);
  EXPECT_THROW(MaterialLaw::mohsen(1.0, 0.0, 0.0, 0.0), ValidationError);
  EXPECT_NO_THROW(MaterialLaw::mohsen(0.0, 1.0, 0.0, 1.0));
  EXPECT_THROW(MaterialLaw::senior(1.0, 0.0, 1.0), ValidationError);
  EXPECT_THROW(MaterialLaw::eddy_fractional(1.0, 0.0), ValidationError);
}

TEST(Eval, FamiliesAreAnalytic) {
  std::vector<MaterialLaw> laws{MaterialLaw::mohsen(1.0, 0.5, 2.0, 1.5), MaterialLaw::senior(1.0, 2.0, 1.5),
                                MaterialLaw::eddy_fractional(1.0, 2.0), MaterialLaw::burque_kappa(1.0, 0.5)};
  for (const auto& law : laws) {
    for (Complex z : random_ball_points(10, 1.0, 3)) EXPECT_LE(analyticity_defect(law, z), 1e-6);
  }
}

TEST(Burque, ZeroCurvatureIsIdentity) {
  MaterialLaw b = MaterialLaw::burque_kappa(0.0, 0.7);
  for (Complex z : random_ball_points(10, 1.0, 5)) EXPECT_EQ(b.scalar_value(z), z);
  EXPECT_LE(burque_kappa_identity(0.0, 0.7, 50), 1e-15);
}

TEST(Burque, SingleSpotValue) {
  const double k = 1.0, g = 0.0;
  const Complex s(1.0, 1.0);
  Complex lhs = 1.0 - (k / 2.0) / (s + k / 4.0 + g);
  Complex rhs = (s - k / 4.0 + g) / (s + k / 4.0 + g);
  EXPECT_LE(std::abs(lhs - rhs), 1e-15);
  // kappa(z) = z (1 - (k/2)(s + k/4 + g)^{-1}) at z = 1/s
  MaterialLaw b = MaterialLaw::burque_kappa(k, g);
  EXPECT_LE(std::abs(b.scalar_value(1.0 / s) - rhs / s), 1e-15);
}

TEST(Burque, RandomParameters) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) worst = std::max(worst, burque_kappa_identity(u(rng), u(rng), 100));
  EXPECT_LE(worst, 1e-13);
}

TEST(Posdef, IdentityLawRecoversRho0) {
  MaterialLaw law = MaterialLaw::affine(sparse_identity(1), SpMat(1, 1));
  for (double rho0 : {0.5, 1.0, 4.0}) {
    PosdefReport r = posdef_check(law, rho0);
    EXPECT_NEAR(r.c_est, rho0, 1e-3 * rho0);
    EXPECT_TRUE(r.positive());
  }
}

TEST(Posdef, LinearLawIsIdentityAfterCancellation) {
  MaterialLaw law = MaterialLaw::affine(SpMat(2, 2), sparse_identity(2));
  EXPECT_NEAR(posdef_check(law, 1.0).c_est, 1.0, 1e-14);
}

TEST(Posdef, BlockMinimum) {
  Vec d0(2), d1(2);
  d0 << 1.0, 0.0;
  d1 << 0.0, 1.0;
  MaterialLaw law = MaterialLaw::affine(sparse_diag(d0), sparse_diag(d1));
  for (double rho0 : {0.5, 2.0}) EXPECT_NEAR(posdef_check(law, rho0).c_est, std::min(rho0, 1.0), 1e-3);
}

TEST(Posdef, MonotoneInSampleCount) {
  MaterialLaw law = MaterialLaw::block_diagonal(
      {MaterialLaw::eddy_fractional(1.0, 2.0), MaterialLaw::mohsen(1.0, 0.3, 0.5, 2.0),
       MaterialLaw::affine(sparse_identity(1), SpMat(1, 1))});
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {4, 16, 64, 256}) {
    PosdefReport r = posdef_check(law, 1.0, {n, n});
    EXPECT_LE(r.c_est, prev);
    EXPECT_EQ(r.samples, 2 * n);
    prev = r.c_est;
  }
}

TEST(Posdef, SampledMatchesAffine) {
  std::mt19937 rng(2);
  Mat a = testing::random_spd(3, rng);
  Mat b = testing::random_spd(3, rng);
  MaterialLaw affine = MaterialLaw::affine(testing::sparse(a), testing::sparse(b));
  MaterialLaw sampled = MaterialLaw::sampled(
      [a, b](Complex z) { return CMat(a.cast<Complex>() + z * b.cast<Complex>()); }, 3);
  EXPECT_NEAR(posdef_check(affine, 1.0, {32, 32}).c_est, posdef_check(sampled, 1.0, {32, 32}).c_est, 1e-12);
}

TEST(Posdef, AffineBoundAtLargeRho0) {
  models::GKSystem gk = models::gk_assemble({}, Grid::periodic(3, 3));
  const MaterialLaw& law = gk.law;
  AffineReport ar = affine_sufficient(law.m0(), law.m1());
  ASSERT_TRUE(ar.sufficient);
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(law.m1()), Eigen::EigenvaluesOnly);
  const double m1_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  const double rho0 = 10.0 * (1.0 + m1_norm) / ar.c0;
  const double bound = std::min(rho0 * ar.c0 - m1_norm - 2.0 * m1_norm * m1_norm / ar.c1, ar.c1 / 2.0);
  EXPECT_GE(posdef_check(law, rho0, {64, 64}).c_est, bound);
}

TEST(AffineSufficient, IdentityWithoutKernel) {
  AffineReport r = affine_sufficient(sparse_identity(3), SpMat(3, 3));
  EXPECT_DOUBLE_EQ(r.c0, 1.0);
  EXPECT_EQ(r.kernel_dim, 0);
  EXPECT_TRUE(r.sufficient);
}

TEST(AffineSufficient, SkewDampingIsNotEnough) {
  Mat s(2, 2);
  s << 0.0, 1.0, -1.0, 0.0;
  AffineReport r = affine_sufficient(SpMat(2, 2), testing::sparse(s));
  EXPECT_NEAR(r.c1, 0.0, 1e-15);
  EXPECT_FALSE(r.sufficient);
}

TEST(AffineSufficient, RejectsNonSelfAdjointM0) {
  Mat m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(affine_sufficient(testing::sparse(m), SpMat(2, 2)), ValidationError);
}

TEST(AffineSufficient, GuyerKrumhanslLaw) {
  models::GKParams p;
  p.tau0 = 2.0;
  p.rho_c = 0.5;
  p.kappa = 4.0;
  models::GKSystem gk = models::gk_assemble(p, Grid::periodic(3, 3));
  AffineReport r = affine_sufficient(gk.law.m0(), gk.law.m1());
  EXPECT_TRUE(r.sufficient);
  EXPECT_EQ(r.kernel_dim, 9 * 27);
  // range eigenvalues tau0 / kappa and rho c; kernel block C^{-1} pointwise
  EXPECT_NEAR(r.c0, std::min(p.tau0 / p.kappa, p.rho_c), 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(models::gk_pointwise(gk.coeffs, p.kappa).inverse());
  EXPECT_NEAR(r.c1, es.eigenvalues().minCoeff(), 1e-12);
}

}  // namespace
}  // namespace agds
