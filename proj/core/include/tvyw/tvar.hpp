#pragma once

#include "tvyw/series.hpp"
#include "tvyw/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace tvyw {

//! Random smooth partial-autocorrelation paths
//!   pacf_k(u) = sum_{j=1}^{F-1} a(j-1, k) j^2 cos(j u) / (F (F-1) (2F-1) / 6)
//! mapped to AR coefficients by pacf_to_ar with margin delta.
struct PacfPathSpec
{
  int p = 1;
  int F = 5;
  Eigen::MatrixXd a; //!< (F-1) x p, entries in [-1, 1]
  double delta = 0.9;
};

//! theta(u) == theta.
struct ConstantCoefficients
{
  std::vector<double> theta;
};

//! theta_j(u) = level_j + amplitude_j cos(frequency_j u).
struct CosineCoefficients
{
  std::vector<double> level;
  std::vector<double> amplitude;
  std::vector<double> frequency;
};

using CoefficientSpec = std::variant<PacfPathSpec, ConstantCoefficients, CosineCoefficients>;

//! sigma(u) = level + amplitude cos(frequency u).
struct SigmaSpec
{
  double level = 1.0;
  double amplitude = 0.0;
  double frequency = 0.0;
};

struct ModelSpec
{
  CoefficientSpec coefficients;
  SigmaSpec sigma;
  std::optional<std::uint64_t> seed; //!< seed that drew a PacfPathSpec, if any
};

enum class Innovation { Gaussian };

//! TVAR(p) model X_t = sum_j theta_j(t/T) X_{t-j} + sigma(t/T) xi_t.
//! Immutable; the coefficient path is defined for every real u.
class TvarModel
{
public:
  //! Validates the spec. Non-PACF coefficient specs get their stability margin
  //! from the companion spectral radius over u in [-1, 2]; an unstable path
  //! throws Error(InvalidArgument).
  explicit TvarModel(ModelSpec spec);

  int order() const noexcept { return order_; }
  //! Stability margin: roots of 1 - sum theta_j(u) z^j lie outside |z| < 1/delta.
  double delta() const noexcept { return delta_; }
  const ModelSpec& spec() const noexcept { return spec_; }

  std::vector<double> theta(double u) const;
  void theta_into(double u, std::span<double> out) const;
  double sigma(double u) const;
  ArSnapshot snapshot(double u) const;

  //! Constant-coefficient model theta(u), sigma(u) frozen at u.
  TvarModel frozen(double u) const;

  //! The partial autocorrelations pacf_k(u) of a PACF-path model.
  std::vector<double> pacf(double u) const;

private:
  ModelSpec spec_;
  int order_ = 0;
  double delta_ = 0.0;
};

//! Adapted Levinson-Durbin: partial autocorrelations to AR coefficients, then
//! theta_j = delta^j theta_check_j. Throws InvalidPacf if any |pacf_k| >= 1.
std::vector<double> pacf_to_ar(std::span<const double> pacf, double delta);

//! Draws a_{j,k} ~ U[-1, 1] from a generator seeded with `seed`.
TvarModel random_model(int p, int F, double delta, SigmaSpec sigma, std::uint64_t seed);

//! theta(t/T) and sigma(t/T) tabulated over a range of t, so repeated
//! simulations of one model share the path evaluation.
class CoefficientPath
{
public:
  CoefficientPath(const TvarModel& model, TimeIndex T, TimeRange range);

  int order() const noexcept { return order_; }
  TimeIndex T() const noexcept { return T_; }
  const TimeRange& range() const noexcept { return range_; }
  std::span<const double> theta(TimeIndex t) const
  {
    return { theta_.data() + static_cast<std::size_t>(t - range_.first) * order_,
             static_cast<std::size_t>(order_) };
  }
  double sigma(TimeIndex t) const { return sigma_[static_cast<std::size_t>(t - range_.first)]; }
  double delta() const noexcept { return delta_; }

private:
  int order_;
  TimeIndex T_;
  TimeRange range_;
  double delta_;
  std::vector<double> theta_;
  std::vector<double> sigma_;
};

inline constexpr int kDefaultBurnIn = 2000;

//! ceil(log(1e-12) / log(delta)): burn-in after which the zero start has
//! decayed below 1e-12 at contraction rate delta.
int minimum_burn_in(double delta);

//! Iterates the TVAR recursion from zeros at t_range.first - burn_in and
//! returns X_t over t_range. xi_t depends only on (seed, t).
//! Throws InvalidArgument if burn_in < minimum_burn_in(delta) and
//! NonFiniteSample on overflow.
Series simulate(const TvarModel& model,
                TimeIndex T,
                TimeRange t_range,
                int burn_in,
                std::uint64_t seed,
                Innovation innovation = Innovation::Gaussian);

//! Same as above on a pre-tabulated path; the path must cover
//! [t_range.first - burn_in, t_range.last].
Series simulate(const CoefficientPath& path,
                TimeRange t_range,
                int burn_in,
                std::uint64_t seed,
                Innovation innovation = Innovation::Gaussian);

//! Spectral norm of A((t-1)/T) A((t-2)/T) ... A((t-j)/T), A the companion
//! matrix; 1 for j = 0.
double companion_product_norm(const TvarModel& model, TimeIndex T, TimeIndex t, int j);

} // namespace tvyw
