#include "test_support.hpp"

#include "tvyw/estimator.hpp"
#include "tvyw/spectral.hpp"
#include "tvyw/taper.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace tvyw;

TEST(Property, RawEstimateNormAndRootBounds)
{
  std::mt19937_64 rng(2024);
  const auto names = taper_names();
  for (int trial = 0; trial < 3000; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 6);
    const int M = 2 * (d + 1 + static_cast<int>(rng() % 200));
    const Series x(0, check::fuzz_samples(rng, static_cast<std::size_t>(M)));
    const Taper h = taper_by_name(names[rng() % names.size()]);
    const auto est = raw_estimate(x, M / 2 - 1, M, M, h, d);
    ASSERT_EQ(est.theta.size(), static_cast<std::size_t>(d));
    const double norm = euclidean_norm(est.theta);
    ASSERT_TRUE(std::isfinite(norm));
    EXPECT_LE(norm, std::ldexp(1.0, d) - 1.0) << "trial " << trial;
    EXPECT_GE(min_root_modulus(est.theta), 1.0 - 1e-8) << "trial " << trial;
  }
}

TEST(Property, WindowLagsPositiveSemidefinite)
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 6);
    const int M = 2 * (d + 1 + static_cast<int>(rng() % 100));
    const Series x(0, check::fuzz_samples(rng, static_cast<std::size_t>(M)));
    const auto win = tapered_autocovariance(x, M / 2 - 1, M, M, sine_taper(), d);
    if (win.lags[0] == 0.0)
      continue;
    const Eigen::MatrixXd G = toeplitz(win.lags, d + 1) / win.lags[0];
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Property, LocalYuleWalkerRoundTrip)
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 5);
    const ArSnapshot snap{ check::random_stable_theta(rng, p, 0.9), 0.5 + (rng() % 100) / 50.0 };
    const auto th = local_yule_walker(ar_autocovariance(snap, p), p);
    for (int j = 0; j < p; ++j)
      EXPECT_NEAR(th[j], snap.theta[j], 1e-10);
  }
}

TEST(Property, EigenvalueSandwich)
{
  constexpr double kPi = std::numbers::pi;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 4);
    const ArSnapshot snap{ check::random_stable_theta(rng, p, 0.9), 1.0 };
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < 4096; ++i) {
      const double f = local_spectral_density(snap, -kPi + 2.0 * kPi * i / 4096.0);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    for (int d = 1; d <= 8; ++d) {
      const auto ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(toeplitz_matrix(ar_autocovariance(snap, d), d)).eigenvalues();
      EXPECT_GE(ev.minCoeff(), 2 * kPi * lo - 1e-8);
      EXPECT_LE(ev.maxCoeff(), 2 * kPi * hi + 1e-8);
    }
  }
}

TEST(Property, RombergWeightsReproducePolynomials)
{
  // Combining values f(x_j) = x_j^i over x_j = 2^j annihilates the powers the
  // weights were built to cancel and keeps the constant term.
  for (int k = 1; k <= 8; ++k) {
    const auto w = romberg_weights(k, false);
    for (int i = 0; i <= k; ++i) {
      long double s = 0.0L;
      for (int j = 0; j <= k; ++j)
        s += w[j] * std::pow(2.0L, static_cast<long double>(i * j));
      EXPECT_NEAR(static_cast<double>(s), i == 0 ? 1.0 : 0.0, 1e-10) << "k=" << k << " i=" << i;
    }
  }
}
