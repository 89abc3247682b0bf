#include "tvyw/spectral.hpp"

#include "tvyw/error.hpp"
#include "tvyw/linalg.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace tvyw {

double
local_spectral_density(const ArSnapshot& snap, double lambda)
{
  std::complex<double> poly = 1.0;
  for (int j = 1; j <= snap.order(); ++j)
    poly -= snap.theta[j - 1] * std::polar(1.0, -j * lambda);
  return snap.sigma * snap.sigma / (2.0 * std::numbers::pi) / std::norm(poly);
}

CovarianceSequence
ar_autocovariance(const ArSnapshot& snap, int max_lag)
{
  if (max_lag < 0)
    throw Error(ErrorCode::InvalidArgument, "max_lag must be >= 0");

  const int p = snap.order();
  const auto& theta = snap.theta;

  // Rows l = 0..p of gamma(l) - sum_j theta_j gamma(|l-j|) = sigma^2 1{l=0}.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p + 1, p + 1);
  for (int l = 0; l <= p; ++l)
    for (int j = 1; j <= p; ++j)
      a(l, std::abs(l - j)) -= theta[j - 1];
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
  rhs(0) = snap.sigma * snap.sigma;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw Error(ErrorCode::NumericalSingularity,
                "autocovariance system is singular; theta is not stable");
  const Eigen::VectorXd g = lu.solve(rhs);
  if (!g.allFinite() || (snap.sigma != 0.0 && !(g(0) > 0.0)))
    throw Error(ErrorCode::NumericalSingularity,
                "autocovariance system has no valid solution; theta is not stable");

  std::vector<double> gamma(std::max(max_lag, p) + 1, 0.0);
  for (int l = 0; l <= p; ++l)
    gamma[l] = g(l);
  for (int l = p + 1; l <= max_lag; ++l) {
    double acc = 0.0;
    for (int j = 1; j <= p; ++j)
      acc += theta[j - 1] * gamma[l - j];
    gamma[l] = acc;
  }
  gamma.resize(max_lag + 1);
  return CovarianceSequence(std::move(gamma));
}

Eigen::MatrixXd
toeplitz_matrix(const CovarianceSequence& cov, int d)
{
  if (d < 1 || d > cov.dimension() + 1)
    throw Error(ErrorCode::DimensionMismatch,
                "Toeplitz order " + std::to_string(d) +
                  " exceeds available lags " + std::to_string(cov.dimension()));
  return toeplitz(cov.values(), d);
}

std::vector<double>
local_yule_walker(const CovarianceSequence& cov, int d)
{
  if (d < 1 || d > cov.dimension())
    throw Error(ErrorCode::DimensionMismatch,
                "Yule-Walker order " + std::to_string(d) + " needs lags 0.." +
                  std::to_string(d));
  const auto lags = cov.values();
  auto theta = solve_yule_walker_system(lags, d);

  const Eigen::MatrixXd gamma = toeplitz(lags, d);
  const Eigen::Map<const Eigen::VectorXd> th(theta.data(), d);
  const Eigen::Map<const Eigen::VectorXd> rhs(lags.data() + 1, d);
  const double scale =
    Eigen::Map<const Eigen::VectorXd>(lags.data(), d + 1).norm();
  const double residual = (gamma * th - rhs).norm();
  if (!std::isfinite(residual) || residual > 1e-8 * scale)
    throw Error(ErrorCode::NumericalSingularity,
                "Yule-Walker residual " + std::to_string(residual) +
                  " exceeds tolerance");
  return theta;
}

} // namespace tvyw
