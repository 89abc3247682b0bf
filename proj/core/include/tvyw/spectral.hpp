#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tvyw {

//! AR coefficients and innovation scale frozen at one rescaled time u.
struct ArSnapshot
{
  std::vector<double> theta; //!< theta_1(u)..theta_p(u)
  double sigma = 1.0;        //!< sigma(u)

  int order() const noexcept { return static_cast<int>(theta.size()); }
};

//! Autocovariances gamma(0..d).
class CovarianceSequence
{
public:
  CovarianceSequence() = default;
  explicit CovarianceSequence(std::vector<double> values)
    : values_(std::move(values))
  {}

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t lag) const { return values_[lag]; }
  //! Largest lag held, d.
  int dimension() const noexcept { return static_cast<int>(values_.size()) - 1; }

private:
  std::vector<double> values_;
};

//! f(u, lambda) = sigma^2 / (2 pi) |1 - sum_j theta_j e^{-i j lambda}|^{-2}.
double local_spectral_density(const ArSnapshot& snap, double lambda);

//! Exact stationary autocovariances of the AR(p) snapshot for lags 0..max_lag,
//! from the (p+1)-dimensional Yule-Walker linear system and the AR recursion.
//! Throws Error(NumericalSingularity) if the system cannot be solved, which
//! happens when theta lies outside the stable region.
CovarianceSequence ar_autocovariance(const ArSnapshot& snap, int max_lag);

//! d x d matrix Gamma_{i,j} = gamma(|i-j|). Requires d <= cov.dimension() + 1.
Eigen::MatrixXd toeplitz_matrix(const CovarianceSequence& cov, int d);

//! theta_u = Gamma_d^{-1} [gamma(1)..gamma(d)]'.
//! Throws Error(NumericalSingularity) if the residual exceeds 1e-8 |gamma|.
std::vector<double> local_yule_walker(const CovarianceSequence& cov, int d);

} // namespace tvyw
