#include "tvyw/linalg.hpp"

#include "tvyw/error.hpp"

#include <cmath>
#include <limits>

namespace tvyw {

LevinsonResult
levinson_durbin(std::span<const double> lags, int d, double breakdown_tol)
{
  if (d < 0 || lags.size() < static_cast<std::size_t>(d) + 1)
    throw Error(ErrorCode::DimensionMismatch,
                "Levinson-Durbin needs d+1 lags");

  LevinsonResult out;
  out.coefficients.assign(d, 0.0);
  out.reflection.assign(d, 0.0);
  out.errors.assign(d + 1, 0.0);

  double err = lags[0];
  out.errors[0] = err;
  if (!(err > 0.0)) {
    out.ok = (d == 0);
    return out;
  }

  std::vector<double> prev(d, 0.0);
  auto& phi = out.coefficients;
  for (int k = 1; k <= d; ++k) {
    double acc = lags[k];
    for (int j = 1; j < k; ++j)
      acc -= phi[j - 1] * lags[k - j];
    const double kappa = acc / err;

    std::copy(phi.begin(), phi.begin() + (k - 1), prev.begin());
    for (int j = 1; j < k; ++j)
      phi[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
    phi[k - 1] = kappa;
    out.reflection[k - 1] = kappa;

    err *= (1.0 - kappa) * (1.0 + kappa);
    out.errors[k] = err;
    if (err < -breakdown_tol * lags[0] || !std::isfinite(err)) {
      out.ok = false;
      // Undo this stage so that coefficients hold the last valid order.
      std::copy(prev.begin(), prev.begin() + (k - 1), phi.begin());
      phi[k - 1] = 0.0;
      out.reflection[k - 1] = 0.0;
      return out;
    }
    if (err <= 0.0 && k < d) {
      // Perfectly predictable at order k; higher orders are not identified.
      out.ok = false;
      out.completed_order = k;
      return out;
    }
    out.completed_order = k;
  }
  return out;
}

Eigen::MatrixXd
toeplitz(std::span<const double> lags, int d)
{
  if (d < 0 || lags.size() < static_cast<std::size_t>(d))
    throw Error(ErrorCode::DimensionMismatch,
                "Toeplitz matrix of order " + std::to_string(d) +
                  " needs at least that many lags");
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i, j) = lags[std::abs(i - j)];
  return m;
}

std::vector<double>
solve_yule_walker_system(std::span<const double> lags, int d)
{
  auto lev = levinson_durbin(lags, d);
  if (lev.ok)
    return std::move(lev.coefficients);

  const Eigen::MatrixXd gamma = toeplitz(lags, d);
  Eigen::VectorXd rhs(d);
  for (int i = 0; i < d; ++i)
    rhs(i) = lags[i + 1];
  const Eigen::VectorXd sol = gamma.ldlt().solve(rhs);
  if (!sol.allFinite())
    return std::move(lev.coefficients);
  return { sol.data(), sol.data() + d };
}

Eigen::MatrixXd
companion_matrix(std::span<const double> theta)
{
  const auto p = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    a(0, j) = theta[j];
  for (Eigen::Index i = 1; i < p; ++i)
    a(i, i - 1) = 1.0;
  return a;
}

std::vector<std::complex<double>>
ar_polynomial_roots(std::span<const double> theta)
{
  std::vector<std::complex<double>> roots;
  if (theta.empty())
    return roots;
  const Eigen::MatrixXd a = companion_matrix(theta);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  for (const auto& w : solver.eigenvalues()) {
    if (std::abs(w) > 0.0)
      roots.push_back(1.0 / w);
  }
  return roots;
}

double
min_root_modulus(std::span<const double> theta)
{
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : ar_polynomial_roots(theta))
    m = std::min(m, std::abs(z));
  return m;
}

bool
in_stability_class(std::span<const double> theta, double delta, double tol)
{
  return min_root_modulus(theta) >= 1.0 / delta - tol;
}

double
euclidean_norm(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

} // namespace tvyw
