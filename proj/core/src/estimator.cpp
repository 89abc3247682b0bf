#include "tvyw/estimator.hpp"

#include "tvyw/error.hpp"
#include "tvyw/linalg.hpp"

#include <cmath>

namespace tvyw {

std::string_view
to_string(Alignment a) noexcept
{
  return a == Alignment::Centered ? "centered" : "causal";
}

Alignment
alignment_from_string(std::string_view s)
{
  if (s == "centered")
    return Alignment::Centered;
  if (s == "causal")
    return Alignment::Causal;
  throw Error(ErrorCode::InvalidArgument, "unknown alignment '" + std::string(s) + "'");
}

std::string_view
to_string(EstimateKind k) noexcept
{
  return k == EstimateKind::Raw ? "raw" : "bias_reduced";
}

TimeRange
window_range(TimeIndex t_center, int M, Alignment alignment)
{
  if (alignment == Alignment::Centered)
    return { t_center - M / 2 + 1, t_center + M / 2 };
  return { t_center - M, t_center - 1 };
}

CovarianceWindow
tapered_autocovariance(const Series& x,
                       TimeIndex t_center,
                       TimeIndex T,
                       int M,
                       const Taper& h,
                       int d,
                       Alignment alignment)
{
  if (M <= 0 || M % 2 != 0)
    throw Error(ErrorCode::OddBandwidth, "bandwidth must be a positive even integer, got " + std::to_string(M));
  if (d < 0 || d >= M)
    throw Error(ErrorCode::InvalidArgument, "need 0 <= d < M");
  if (T <= 0)
    throw Error(ErrorCode::InvalidArgument, "T must be positive");

  const auto samples = x.window(window_range(t_center, M, alignment));

  CovarianceWindow win;
  win.u = static_cast<double>(t_center) / static_cast<double>(T);
  win.t_center = t_center;
  win.M = M;
  win.taper_name = h.name();
  win.alignment = alignment;
  win.lags.assign(d + 1, 0.0);

  // y_i = h(i/M) X_{s(i)}, i = 1..M.
  std::vector<double> y(M);
  double weight_sum = 0.0;
  for (int i = 0; i < M; ++i) {
    const double w = h(static_cast<double>(i + 1) / M);
    weight_sum += w * w;
    y[i] = w * samples[i];
  }
  if (weight_sum == 0.0)
    return win;

  for (int l = 0; l <= d; ++l) {
    double acc = 0.0;
    for (int i = l; i < M; ++i)
      acc += y[i] * y[i - l];
    win.lags[l] = acc / weight_sum;
  }
  return win;
}

CoefficientEstimate
empirical_yule_walker(const CovarianceWindow& win, int d)
{
  if (d < 1 || win.lags.size() < static_cast<std::size_t>(d) + 1)
    throw Error(ErrorCode::DimensionMismatch,
                "window holds " + std::to_string(win.lags.size()) + " lags, order " +
                  std::to_string(d) + " needs d+1");

  CoefficientEstimate est;
  est.kind = EstimateKind::Raw;
  est.M = win.M;
  est.bandwidths = { win.M };
  est.weights = { 1.0L };

  if (!(win.lags[0] > kSingularFloor)) {
    est.theta.assign(d, 0.0);
    est.degenerate = true;
    return est;
  }

  const std::span<const double> lags(win.lags.data(), d + 1);
  auto lev = levinson_durbin(lags, d);
  if (lev.ok) {
    est.theta = std::move(lev.coefficients);
    return est;
  }
  // Near-singular window: try a direct solve and keep it only if it honours
  // the norm bound, else fall back to the last stable Levinson order.
  auto direct = solve_yule_walker_system(lags, d);
  const double bound = std::ldexp(1.0, d) - 1.0;
  const double n = euclidean_norm(direct);
  if (std::isfinite(n) && n <= bound && min_root_modulus(direct) >= 1.0 - 1e-8)
    est.theta = std::move(direct);
  else
    est.theta = std::move(lev.coefficients);
  return est;
}

int
romberg_order(double beta)
{
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  return static_cast<int>(std::ceil(beta)) - 1;
}

std::vector<long double>
romberg_weights(int k, bool symmetric)
{
  if (k < 0)
    throw Error(ErrorCode::InvalidArgument, "Romberg order must be >= 0");
  if (k == 0)
    return { 1.0L };

  if (!symmetric) {
    // Lagrange basis at 0 on nodes x_j = 2^j: w_j = prod_{m != j} x_m / (x_m - x_j).
    std::vector<long double> w(k + 1);
    for (int j = 0; j <= k; ++j) {
      long double prod = 1.0L;
      const long double xj = std::ldexp(1.0L, j);
      for (int m = 0; m <= k; ++m) {
        if (m == j)
          continue;
        const long double xm = std::ldexp(1.0L, m);
        prod *= xm / (xm - xj);
      }
      w[j] = prod;
    }
    return w;
  }

  // Rows {0, 2, .., k}, nodes x_j = 2^j for j < k. With v_j = w_j x_j^2 the
  // rows 2..k say v is orthogonal to 1, x, .., x^{k-2}, so v_j is
  // proportional to the divided-difference weights 1 / prod_{m != j}(x_j - x_m);
  // row 0 fixes the scale.
  std::vector<long double> w(k);
  long double total = 0.0L;
  for (int j = 0; j < k; ++j) {
    const long double xj = std::ldexp(1.0L, j);
    long double denom = 1.0L;
    for (int m = 0; m < k; ++m) {
      if (m != j)
        denom *= xj - std::ldexp(1.0L, m);
    }
    w[j] = 1.0L / (denom * xj * xj);
    total += w[j];
  }
  for (auto& v : w)
    v /= total;
  return w;
}

std::vector<int>
romberg_bandwidths(int M, double beta, bool symmetric_taper)
{
  const int k = romberg_order(beta);
  const int count = symmetric_taper ? std::max(k, 1) : k + 1;
  std::vector<int> out(count);
  for (int j = 0; j < count; ++j) {
    const long long b = static_cast<long long>(M) << j;
    if (b > (1LL << 30))
      throw Error(ErrorCode::InvalidArgument, "bandwidth ladder overflows");
    out[j] = static_cast<int>(b);
  }
  return out;
}

TimeRange
bias_reduced_support(TimeIndex t_center,
                     int M,
                     double beta,
                     bool symmetric_taper,
                     Alignment alignment)
{
  return window_range(t_center, romberg_bandwidths(M, beta, symmetric_taper).back(), alignment);
}

CoefficientEstimate
combine_estimates(std::span<const CoefficientEstimate> raws,
                  std::span<const long double> weights)
{
  if (raws.empty() || raws.size() != weights.size())
    throw Error(ErrorCode::DimensionMismatch, "one weight per raw estimate required");
  const std::size_t d = raws.front().theta.size();

  CoefficientEstimate est;
  est.kind = EstimateKind::BiasReduced;
  est.M = raws.front().M;
  est.weights.assign(weights.begin(), weights.end());
  std::vector<long double> acc(d, 0.0L);
  for (std::size_t j = 0; j < raws.size(); ++j) {
    if (raws[j].theta.size() != d)
      throw Error(ErrorCode::DimensionMismatch, "raw estimates differ in order");
    est.bandwidths.push_back(raws[j].M);
    est.degenerate = est.degenerate || raws[j].degenerate;
    for (std::size_t i = 0; i < d; ++i)
      acc[i] += weights[j] * raws[j].theta[i];
  }
  est.theta.assign(acc.begin(), acc.end());
  return est;
}

CoefficientEstimate
raw_estimate(const Series& x,
             TimeIndex t_center,
             TimeIndex T,
             int M,
             const Taper& h,
             int d,
             Alignment alignment)
{
  return empirical_yule_walker(tapered_autocovariance(x, t_center, T, M, h, d, alignment), d);
}

CoefficientEstimate
bias_reduced_estimate(const Series& x,
                      TimeIndex t_center,
                      TimeIndex T,
                      int M,
                      const Taper& h,
                      int d,
                      double beta,
                      Alignment alignment)
{
  const bool symmetric = h.is_symmetric();
  const auto bands = romberg_bandwidths(M, beta, symmetric);
  const auto weights = romberg_weights(romberg_order(beta), symmetric);

  std::vector<CoefficientEstimate> raws;
  raws.reserve(bands.size());
  for (int b : bands)
    raws.push_back(raw_estimate(x, t_center, T, b, h, d, alignment));
  return combine_estimates(raws, weights);
}

int
minimax_bandwidth(TimeIndex T, double beta)
{
  if (T < 2)
    throw Error(ErrorCode::InvalidArgument, "T must be >= 2");
  if (!(beta > 0.0))
    throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  const double a = 2.0 * beta / (2.0 * beta + 1.0);
  const double t = static_cast<double>(T);
  auto n = static_cast<long long>(std::floor(std::pow(t, a)));
  // Guard against pow rounding just below an exact integer power, or above.
  while (n > 1 && std::pow(static_cast<double>(n), 1.0 / a) > t * (1.0 + 1e-12))
    --n;
  while (std::pow(static_cast<double>(n + 1), 1.0 / a) <= t * (1.0 + 1e-12))
    ++n;
  return static_cast<int>(2 * n);
}

double
estimation_loss(const CoefficientEstimate& estimate, std::span<const double> truth)
{
  if (estimate.theta.size() != truth.size())
    throw Error(ErrorCode::DimensionMismatch,
                "estimate has order " + std::to_string(estimate.theta.size()) + ", truth " +
                  std::to_string(truth.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double diff = estimate.theta[i] - truth[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

} // namespace tvyw
