#include "tvyw/tvar.hpp"

#include "tvyw/error.hpp"
#include "tvyw/linalg.hpp"
#include "tvyw/random.hpp"

#include <cmath>
#include <random>

namespace tvyw {

namespace {

int
spec_order(const CoefficientSpec& spec)
{
  return std::visit(
    [](const auto& s) -> int {
      using S = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<S, PacfPathSpec>)
        return s.p;
      else if constexpr (std::is_same_v<S, ConstantCoefficients>)
        return static_cast<int>(s.theta.size());
      else
        return static_cast<int>(s.level.size());
    },
    spec);
}

void
validate(const ModelSpec& spec)
{
  if (const auto* pacf = std::get_if<PacfPathSpec>(&spec.coefficients)) {
    if (pacf->p < 1)
      throw Error(ErrorCode::InvalidArgument, "AR order p must be >= 1");
    if (pacf->F < 2)
      throw Error(ErrorCode::InvalidArgument, "number of harmonics F must be >= 2");
    if (pacf->a.rows() != pacf->F - 1 || pacf->a.cols() != pacf->p)
      throw Error(ErrorCode::DimensionMismatch, "PACF coefficient matrix must be (F-1) x p");
    if ((pacf->a.array().abs() > 1.0).any())
      throw Error(ErrorCode::InvalidArgument, "PACF coefficients must lie in [-1, 1]");
    if (!(pacf->delta > 0.0 && pacf->delta < 1.0))
      throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  } else if (const auto* cos = std::get_if<CosineCoefficients>(&spec.coefficients)) {
    if (cos->amplitude.size() != cos->level.size() || cos->frequency.size() != cos->level.size())
      throw Error(ErrorCode::DimensionMismatch, "cosine coefficient vectors differ in length");
  }
  if (!std::isfinite(spec.sigma.level) || !std::isfinite(spec.sigma.amplitude) ||
      !std::isfinite(spec.sigma.frequency))
    throw Error(ErrorCode::InvalidArgument, "sigma parameters must be finite");
}

double
spectral_radius(std::span<const double> theta)
{
  if (theta.empty())
    return 0.0;
  const double m = min_root_modulus(theta);
  return std::isinf(m) ? 0.0 : 1.0 / m;
}

} // namespace

std::vector<double>
pacf_to_ar(std::span<const double> pacf, double delta)
{
  const int p = static_cast<int>(pacf.size());
  for (int k = 0; k < p; ++k) {
    if (!(std::abs(pacf[k]) < 1.0))
      throw Error(ErrorCode::InvalidPacf,
                  "partial autocorrelation " + std::to_string(k + 1) + " = " +
                    std::to_string(pacf[k]) + " is not in (-1, 1)");
  }
  if (!(delta > 0.0))
    throw Error(ErrorCode::InvalidArgument, "delta must be positive");

  std::vector<double> cur(pacf.begin(), pacf.end());
  std::vector<double> prev(p);
  // cur[j-1] holds theta_check_{j,k} after round k.
  for (int k = 2; k <= p; ++k) {
    std::copy(cur.begin(), cur.begin() + (k - 1), prev.begin());
    const double kk = pacf[k - 1];
    for (int j = 1; j < k; ++j)
      cur[j - 1] = prev[j - 1] - kk * prev[k - j - 1];
  }
  double scale = 1.0;
  for (int j = 0; j < p; ++j) {
    scale *= delta;
    cur[j] *= scale;
  }
  return cur;
}

TvarModel::TvarModel(ModelSpec spec)
  : spec_(std::move(spec))
{
  validate(spec_);
  order_ = spec_order(spec_.coefficients);
  if (const auto* pacf = std::get_if<PacfPathSpec>(&spec_.coefficients)) {
    delta_ = pacf->delta;
    return;
  }
  double radius = 0.0;
  std::vector<double> th(order_);
  if (std::holds_alternative<ConstantCoefficients>(spec_.coefficients)) {
    radius = spectral_radius(std::get<ConstantCoefficients>(spec_.coefficients).theta);
  } else {
    constexpr int kGrid = 3001;
    for (int i = 0; i < kGrid; ++i) {
      theta_into(-1.0 + 3.0 * i / (kGrid - 1), th);
      radius = std::max(radius, spectral_radius(th));
    }
  }
  if (!(radius < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "coefficient path is not stable (companion spectral radius " +
                  std::to_string(radius) + ")");
  // A white-noise or nilpotent path still needs a positive margin.
  delta_ = std::max(radius, 1e-3);
}

std::vector<double>
TvarModel::pacf(double u) const
{
  const auto* spec = std::get_if<PacfPathSpec>(&spec_.coefficients);
  if (spec == nullptr)
    throw Error(ErrorCode::InvalidArgument, "model is not defined through PACF paths");
  const double F = spec->F;
  const double norm = F * (F - 1.0) * (2.0 * F - 1.0) / 6.0;
  std::vector<double> out(spec->p, 0.0);
  for (int j = 1; j < spec->F; ++j) {
    const double c = static_cast<double>(j) * j * std::cos(j * u);
    for (int k = 0; k < spec->p; ++k)
      out[k] += spec->a(j - 1, k) * c;
  }
  for (auto& v : out)
    v /= norm;
  return out;
}

void
TvarModel::theta_into(double u, std::span<double> out) const
{
  if (out.size() != static_cast<std::size_t>(order_))
    throw Error(ErrorCode::DimensionMismatch, "output span does not match model order");
  std::visit(
    [&](const auto& s) {
      using S = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<S, PacfPathSpec>) {
        const auto th = pacf_to_ar(pacf(u), s.delta);
        std::copy(th.begin(), th.end(), out.begin());
      } else if constexpr (std::is_same_v<S, ConstantCoefficients>) {
        std::copy(s.theta.begin(), s.theta.end(), out.begin());
      } else {
        for (int j = 0; j < order_; ++j)
          out[j] = s.level[j] + s.amplitude[j] * std::cos(s.frequency[j] * u);
      }
    },
    spec_.coefficients);
}

std::vector<double>
TvarModel::theta(double u) const
{
  std::vector<double> out(order_);
  theta_into(u, out);
  return out;
}

double
TvarModel::sigma(double u) const
{
  const auto& s = spec_.sigma;
  return s.level + s.amplitude * std::cos(s.frequency * u);
}

ArSnapshot
TvarModel::snapshot(double u) const
{
  return { theta(u), sigma(u) };
}

TvarModel
TvarModel::frozen(double u) const
{
  ModelSpec spec;
  spec.coefficients = ConstantCoefficients{ theta(u) };
  spec.sigma = SigmaSpec{ sigma(u), 0.0, 0.0 };
  return TvarModel(std::move(spec));
}

TvarModel
random_model(int p, int F, double delta, SigmaSpec sigma, std::uint64_t seed)
{
  if (p < 1 || F < 2)
    throw Error(ErrorCode::InvalidArgument, "random_model needs p >= 1 and F >= 2");
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  PacfPathSpec pacf{ p, F, Eigen::MatrixXd(F - 1, p), delta };
  for (int j = 0; j < F - 1; ++j)
    for (int k = 0; k < p; ++k)
      pacf.a(j, k) = unif(engine);
  ModelSpec spec{ std::move(pacf), sigma, seed };
  return TvarModel(std::move(spec));
}

CoefficientPath::CoefficientPath(const TvarModel& model, TimeIndex T, TimeRange range)
  : order_(model.order())
  , T_(T)
  , range_(range)
  , delta_(model.delta())
{
  if (T <= 0)
    throw Error(ErrorCode::InvalidArgument, "T must be positive");
  const auto n = static_cast<std::size_t>(range.size());
  theta_.resize(n * order_);
  sigma_.resize(n);
  const double inv_t = 1.0 / static_cast<double>(T);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(range.first + static_cast<TimeIndex>(i)) * inv_t;
    model.theta_into(u, { theta_.data() + i * order_, static_cast<std::size_t>(order_) });
    sigma_[i] = model.sigma(u);
  }
}

int
minimum_burn_in(double delta)
{
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "contraction rate must lie in (0, 1)");
  return static_cast<int>(std::ceil(std::log(1e-12) / std::log(delta)));
}

Series
simulate(const CoefficientPath& path,
         TimeRange t_range,
         int burn_in,
         std::uint64_t seed,
         Innovation innovation)
{
  if (innovation != Innovation::Gaussian)
    throw Error(ErrorCode::InvalidArgument, "only Gaussian innovations are supported");
  if (t_range.size() <= 0)
    throw Error(ErrorCode::InvalidArgument, "empty simulation range");
  if (burn_in < minimum_burn_in(path.delta()))
    throw Error(ErrorCode::InvalidArgument,
                "burn_in " + std::to_string(burn_in) + " below minimum " +
                  std::to_string(minimum_burn_in(path.delta())));
  const TimeRange full{ t_range.first - burn_in, t_range.last };
  if (!path.range().contains(full))
    throw Error(ErrorCode::WindowOutOfRange, "coefficient path does not cover the simulation range");

  const int p = path.order();
  const auto n = static_cast<std::size_t>(full.size());
  // p leading zeros hold the initial condition.
  std::vector<double> x(n + p, 0.0);
  std::vector<double> xi(n);
  GaussianInnovations(seed).fill(full.first, xi);

  for (std::size_t i = 0; i < n; ++i) {
    const TimeIndex t = full.first + static_cast<TimeIndex>(i);
    const auto th = path.theta(t);
    double v = path.sigma(t) * xi[i];
    double* cur = x.data() + p + i;
    for (int j = 0; j < p; ++j)
      v += th[j] * cur[-1 - j];
    *cur = v;
  }

  std::vector<double> out(x.begin() + p + burn_in, x.end());
  for (double v : out) {
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteSample, "simulation overflowed; model is not stable");
  }
  return Series(t_range.first, std::move(out));
}

Series
simulate(const TvarModel& model,
         TimeIndex T,
         TimeRange t_range,
         int burn_in,
         std::uint64_t seed,
         Innovation innovation)
{
  if (burn_in < 0)
    throw Error(ErrorCode::InvalidArgument, "burn_in must be non-negative");
  const CoefficientPath path(model, T, { t_range.first - burn_in, t_range.last });
  return simulate(path, t_range, burn_in, seed, innovation);
}

double
companion_product_norm(const TvarModel& model, TimeIndex T, TimeIndex t, int j)
{
  if (j < 0)
    throw Error(ErrorCode::InvalidArgument, "product length must be >= 0");
  const int p = model.order();
  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(p, p);
  std::vector<double> th(p);
  for (int i = 1; i <= j; ++i) {
    model.theta_into(static_cast<double>(t - i) / static_cast<double>(T), th);
    prod = prod * companion_matrix(th);
  }
  if (p == 0)
    return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(prod);
  return svd.singularValues()(0);
}

} // namespace tvyw
