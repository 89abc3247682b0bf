#pragma once

#include "tvyw/series.hpp"
#include "tvyw/taper.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvyw {

//! Placement of the length-M window relative to t_center.
//!   Centered: t_center - M/2 + 1 .. t_center + M/2
//!   Causal:   t_center - M     .. t_center - 1
enum class Alignment { Centered, Causal };

std::string_view to_string(Alignment a) noexcept;
Alignment alignment_from_string(std::string_view s);

TimeRange window_range(TimeIndex t_center, int M, Alignment alignment);

//! Tapered local empirical covariances gamma_hat_{T,M}(u, l), l = 0..d.
struct CovarianceWindow
{
  double u = 0.0;
  TimeIndex t_center = 0;
  int M = 0;
  std::vector<double> lags;
  std::string taper_name;
  Alignment alignment = Alignment::Centered;
};

//! gamma_hat(u, l) = H_M^{-1} sum_{t1 - t2 = l} h(t1/M) h(t2/M) X_{s(t1)} X_{s(t2)}
//! with t1, t2 in 1..M and s(t) the t-th sample of the window, u = t_center/T.
//!
//! Throws OddBandwidth for odd M, WindowOutOfRange when the series does not
//! cover the window and InvalidArgument unless d < M.
CovarianceWindow tapered_autocovariance(const Series& x,
                                        TimeIndex t_center,
                                        TimeIndex T,
                                        int M,
                                        const Taper& h,
                                        int d,
                                        Alignment alignment = Alignment::Centered);

enum class EstimateKind { Raw, BiasReduced };
std::string_view to_string(EstimateKind k) noexcept;

struct CoefficientEstimate
{
  std::vector<double> theta;
  EstimateKind kind = EstimateKind::Raw;
  int M = 0;                         //!< base bandwidth
  std::vector<int> bandwidths;       //!< bandwidths combined (just {M} for Raw)
  std::vector<long double> weights;  //!< Romberg weights (just {1} for Raw)
  bool degenerate = false;           //!< zero-covariance convention fired
};

//! gamma_hat(u, 0) at or below this is treated as an all-zero window.
inline constexpr double kSingularFloor = 1e-300;

//! theta_hat = Gamma_hat^{-1} gamma_hat. An all-zero window yields theta = 0
//! with degenerate = true. The result always satisfies |theta| <= 2^d - 1.
CoefficientEstimate empirical_yule_walker(const CovarianceWindow& win, int d);

//! Smallest k with beta = k + alpha, alpha in (0, 1].
int romberg_order(double beta);

//! Solution of A w = e_1 with A_{i,j} = 2^{ij}, 0 <= i,j <= k. The symmetric
//! variant drops the second row and last column (size k, or {1} for k = 0).
//! Extended precision: for k near 8 the system is too ill-conditioned for
//! double-precision weights to meet a 1e-10 residual.
std::vector<long double> romberg_weights(int k, bool symmetric);

//! Bandwidths M, 2M, ..., combined by the bias-reduced estimator.
std::vector<int> romberg_bandwidths(int M, double beta, bool symmetric_taper);

//! Samples needed by bias_reduced_estimate (the widest window).
TimeRange bias_reduced_support(TimeIndex t_center,
                               int M,
                               double beta,
                               bool symmetric_taper,
                               Alignment alignment);

//! Weighted combination sum_j w_j theta_hat(2^j M) of raw estimates that
//! share the base bandwidth `raws.front().M`.
CoefficientEstimate combine_estimates(std::span<const CoefficientEstimate> raws,
                                      std::span<const long double> weights);

//! theta_tilde(M) = sum_j w_j theta_hat(2^j M), k = ceil(beta) - 1. The
//! symmetric-taper variant is used iff h.is_symmetric().
CoefficientEstimate bias_reduced_estimate(const Series& x,
                                          TimeIndex t_center,
                                          TimeIndex T,
                                          int M,
                                          const Taper& h,
                                          int d,
                                          double beta,
                                          Alignment alignment = Alignment::Centered);

//! Raw estimate at one bandwidth: tapered_autocovariance + empirical_yule_walker.
CoefficientEstimate raw_estimate(const Series& x,
                                 TimeIndex t_center,
                                 TimeIndex T,
                                 int M,
                                 const Taper& h,
                                 int d,
                                 Alignment alignment = Alignment::Centered);

//! M = 2 floor(T^{2 beta / (2 beta + 1)}).
int minimax_bandwidth(TimeIndex T, double beta);

//! |estimate.theta - truth|_2.
double estimation_loss(const CoefficientEstimate& estimate, std::span<const double> truth);

} // namespace tvyw
