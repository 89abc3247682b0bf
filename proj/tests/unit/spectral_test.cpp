#include "test_support.hpp"

#include "tvyw/error.hpp"
#include "tvyw/spectral.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace tvyw;

namespace {

constexpr double kPi = std::numbers::pi;

// gamma(l) = int_{-pi}^{pi} e^{i l lambda} f(lambda) d lambda by the
// rectangle rule, which is spectrally accurate for periodic integrands.
double
quadrature_autocovariance(const ArSnapshot& snap, int lag, int n = 1 << 14)
{
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lambda = -kPi + 2.0 * kPi * i / n;
    s += std::cos(lag * lambda) * local_spectral_density(snap, lambda);
  }
  return s * 2.0 * kPi / n;
}

} // namespace

TEST(SpectralDensity, WhiteNoise)
{
  const ArSnapshot snap{ {}, 1.0 };
  for (double l : { -2.0, 0.0, 0.7, 3.0 })
    EXPECT_NEAR(local_spectral_density(snap, l), 1.0 / (2.0 * kPi), 1e-15);
}

TEST(SpectralDensity, Ar1AtZero)
{
  const ArSnapshot snap{ { 0.5 }, 1.0 };
  EXPECT_NEAR(local_spectral_density(snap, 0.0), 2.0 / kPi, 1e-14);
}

TEST(SpectralDensity, EvenPeriodicPositive)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ul(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ArSnapshot snap{ check::random_stable_theta(rng, 3, 0.9), 1.3 };
    for (int i = 0; i < 100; ++i) {
      const double l = ul(rng);
      const double f = local_spectral_density(snap, l);
      EXPECT_GT(f, 0.0);
      EXPECT_NEAR(f, local_spectral_density(snap, -l), 1e-12 * f);
      EXPECT_NEAR(f, local_spectral_density(snap, l + 2 * kPi), 1e-10 * f);
    }
  }
}

TEST(ArAutocovariance, Ar1ClosedForm)
{
  const auto g = ar_autocovariance({ { 0.5 }, 1.0 }, 2);
  ASSERT_EQ(g.dimension(), 2);
  EXPECT_NEAR(g[0], 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(g[1], 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(g[2], 1.0 / 3.0, 1e-14);
}

TEST(ArAutocovariance, WhiteNoise)
{
  const auto g = ar_autocovariance({ {}, 2.0 }, 1);
  EXPECT_DOUBLE_EQ(g[0], 4.0);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
}

TEST(ArAutocovariance, MatchesSpectralQuadrature)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 1 + trial % 4;
    const ArSnapshot snap{ check::random_stable_theta(rng, p, 0.9), 0.7 + 0.1 * trial };
    const auto g = ar_autocovariance(snap, 8);
    for (int l = 0; l <= 8; ++l)
      EXPECT_NEAR(g[l], quadrature_autocovariance(snap, l), 1e-6) << "lag " << l;
    for (int l = 1; l <= 8; ++l)
      EXPECT_LE(std::abs(g[l]), g[0]);
  }
}

TEST(ArAutocovariance, UnstableThrows)
{
  try {
    ar_autocovariance({ { 1.0 }, 1.0 }, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericalSingularity);
  }
  // Explosive AR(1): the linear system is solvable but gives gamma(0) < 0.
  EXPECT_THROW(ar_autocovariance({ { 1.5 }, 1.0 }, 1), Error);
}

TEST(ToeplitzMatrix, Layout)
{
  const CovarianceSequence cov({ 1.0, 0.5 });
  const Eigen::MatrixXd G = toeplitz_matrix(cov, 2);
  EXPECT_EQ(G(0, 0), 1.0);
  EXPECT_EQ(G(0, 1), 0.5);
  EXPECT_EQ(G(1, 0), 0.5);
  EXPECT_EQ(G(1, 1), 1.0);
  const Eigen::MatrixXd G1 = toeplitz_matrix(cov, 1);
  EXPECT_EQ(G1.rows(), 1);
  EXPECT_EQ(G1(0, 0), 1.0);
}

TEST(ToeplitzMatrix, DimensionMismatch)
{
  const CovarianceSequence cov({ 1.0, 0.5 });
  try {
    toeplitz_matrix(cov, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(toeplitz_matrix(cov, 0), Error);
}

TEST(ToeplitzMatrix, EigenvaluesWithinSpectralBounds)
{
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ArSnapshot snap{ check::random_stable_theta(rng, 3, 0.9), 1.0 };
    double fmin = INFINITY, fmax = 0.0;
    for (int i = 0; i < 4096; ++i) {
      const double f = local_spectral_density(snap, -kPi + 2 * kPi * i / 4096.0);
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
    }
    const int d = 1 + trial % 8;
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(toeplitz_matrix(ar_autocovariance(snap, d), d))
                      .eigenvalues();
    EXPECT_GE(ev.minCoeff(), 2 * kPi * fmin - 1e-8);
    EXPECT_LE(ev.maxCoeff(), 2 * kPi * fmax + 1e-8);
  }
}

TEST(LocalYuleWalker, Ar1)
{
  const auto theta = local_yule_walker(ar_autocovariance({ { 0.5 }, 1.0 }, 1), 1);
  ASSERT_EQ(theta.size(), 1u);
  EXPECT_NEAR(theta[0], 0.5, 1e-14);
}

TEST(LocalYuleWalker, RoundTripRandomAr3)
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t0 = check::random_stable_theta(rng, 3, 0.9);
    const auto theta = local_yule_walker(ar_autocovariance({ t0, 1.0 }, 3), 3);
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(theta[j], t0[j], 1e-10);
    EXPECT_GE(min_root_modulus(theta), 1.0 - 1e-8);
  }
}

TEST(LocalYuleWalker, OverfitPadsWithZeros)
{
  // d > p: the extra coefficients of an AR(1) projection vanish.
  const auto theta = local_yule_walker(ar_autocovariance({ { 0.5 }, 1.0 }, 4), 4);
  EXPECT_NEAR(theta[0], 0.5, 1e-12);
  for (int j = 1; j < 4; ++j)
    EXPECT_NEAR(theta[j], 0.0, 1e-12);
}

TEST(LocalYuleWalker, UnderfitIsStableAndBounded)
{
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t0 = check::random_stable_theta(rng, 4, 0.99);
    for (int d = 1; d <= 3; ++d) {
      const auto theta = local_yule_walker(ar_autocovariance({ t0, 1.0 }, d), d);
      EXPECT_LE(euclidean_norm(theta), std::pow(2.0, d) - 1.0);
      EXPECT_GE(min_root_modulus(theta), 1.0 - 1e-8);
    }
  }
}

TEST(LocalYuleWalker, SingularSystemThrows)
{
  // Gamma_3 is singular and the right-hand side is outside its range.
  const CovarianceSequence cov({ 1.0, 0.0, -1.0, 0.5 });
  EXPECT_THROW(local_yule_walker(cov, 3), Error);
}
