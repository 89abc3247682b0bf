#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace tvyw {

//! Outcome of the Levinson-Durbin recursion on lags gamma(0..d).
struct LevinsonResult
{
  std::vector<double> coefficients; //!< theta_1..theta_d
  std::vector<double> reflection;   //!< partial autocorrelations kappa_1..kappa_d
  std::vector<double> errors;       //!< prediction error variance after each order, errors[0] = gamma(0)
  bool ok = true;                   //!< false if the error variance went non-positive
  int completed_order = 0;          //!< last order reached with positive error variance
};

//! Solves the order-d Yule-Walker system by Levinson-Durbin. `lags` must hold
//! at least d+1 values. Stops early (ok = false) when the prediction error
//! variance drops below -breakdown_tol * gamma(0) or reaches zero.
LevinsonResult levinson_durbin(std::span<const double> lags,
                               int d,
                               double breakdown_tol = 1e-12);

//! Gamma_{i,j} = lags[|i-j|], i,j < d.
Eigen::MatrixXd toeplitz(std::span<const double> lags, int d);

//! Solves toeplitz(lags, d) * theta = lags[1..d]. Levinson first; a pivoted
//! LDLT solve takes over when the recursion breaks down.
std::vector<double> solve_yule_walker_system(std::span<const double> lags, int d);

//! Roots z of 1 - sum_j theta_j z^j, via eigenvalues of the companion matrix.
//! Zero eigenvalues (roots at infinity) are dropped.
std::vector<std::complex<double>> ar_polynomial_roots(std::span<const double> theta);

//! min |z| over the roots of 1 - sum_j theta_j z^j; +inf when there are none.
double min_root_modulus(std::span<const double> theta);

//! Companion matrix [theta'; I 0] of the AR recursion.
Eigen::MatrixXd companion_matrix(std::span<const double> theta);

//! True when every root satisfies |z| >= 1/delta - tol.
bool in_stability_class(std::span<const double> theta, double delta, double tol = 1e-8);

double euclidean_norm(std::span<const double> v);

} // namespace tvyw
