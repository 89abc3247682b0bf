#include "tvyw/predict.hpp"

#include "tvyw/error.hpp"

#include <iomanip>
#include <limits>

namespace tvyw {

std::string_view
to_string(PredictorKind k) noexcept
{
  switch (k) {
    case PredictorKind::Raw:
      return "raw";
    case PredictorKind::BiasReduced:
      return "bias_reduced";
    case PredictorKind::OracleLocal:
      return "oracle_local";
  }
  return "unknown";
}

double
linear_predict(std::span<const double> theta, std::span<const double> history)
{
  if (theta.size() != history.size())
    throw Error(ErrorCode::DimensionMismatch,
                "coefficient order " + std::to_string(theta.size()) + " vs history " +
                  std::to_string(history.size()));
  double v = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k)
    v += theta[k] * history[k];
  return v;
}

namespace {

PredictionRecord
make_record(const Series& x, TimeIndex t, std::span<const double> theta, std::vector<double>& hist, PredictorKind kind)
{
  const int d = static_cast<int>(theta.size());
  for (int k = 0; k < d; ++k)
    hist[k] = x.at(t - 1 - k);
  PredictionRecord r;
  r.t = t;
  r.forecast = linear_predict(theta, hist);
  r.actual = x.at(t);
  const double e = r.forecast - r.actual;
  r.squared_error = e * e;
  r.kind = kind;
  return r;
}

} // namespace

std::vector<PredictionRecord>
rolling_forecast(const Series& x, const RollingForecastOptions& opt)
{
  if (opt.stride < 1)
    throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  if (opt.d < 1)
    throw Error(ErrorCode::InvalidArgument, "prediction order must be >= 1");

  const auto kind = opt.use_bias_reduction ? PredictorKind::BiasReduced : PredictorKind::Raw;
  std::vector<PredictionRecord> out;
  out.reserve(static_cast<std::size_t>(opt.t_range.size()));
  std::vector<double> hist(opt.d);
  std::vector<double> theta(opt.d, 0.0);

  std::int64_t step = 0;
  for (TimeIndex t = opt.t_range.first; t <= opt.t_range.last; ++t, ++step) {
    if (step % opt.stride == 0) {
      const auto est = opt.use_bias_reduction
                         ? bias_reduced_estimate(x, t, opt.T, opt.M, opt.taper, opt.d, opt.beta, Alignment::Causal)
                         : raw_estimate(x, t, opt.T, opt.M, opt.taper, opt.d, Alignment::Causal);
      theta = est.theta;
    }
    out.push_back(make_record(x, t, theta, hist, kind));
  }
  return out;
}

std::vector<PredictionRecord>
oracle_forecast(const Series& x,
                TimeIndex T,
                TimeRange t_range,
                const std::function<std::vector<double>(double)>& theta_path)
{
  std::vector<PredictionRecord> out;
  out.reserve(static_cast<std::size_t>(t_range.size()));
  std::vector<double> hist;
  for (TimeIndex t = t_range.first; t <= t_range.last; ++t) {
    const auto theta = theta_path(static_cast<double>(t) / static_cast<double>(T));
    hist.resize(theta.size());
    out.push_back(make_record(x, t, theta, hist, PredictorKind::OracleLocal));
  }
  return out;
}

double
mean_squared_error(std::span<const PredictionRecord> records)
{
  if (records.empty())
    return 0.0;
  double s = 0.0;
  for (const auto& r : records)
    s += r.squared_error;
  return s / static_cast<double>(records.size());
}

void
write_predictions_csv(std::ostream& out, std::span<const PredictionRecord> records)
{
  out << "t,forecast,actual,squared_error,estimator_kind\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : records)
    out << r.t << ',' << r.forecast << ',' << r.actual << ',' << r.squared_error << ','
        << to_string(r.kind) << '\n';
}

} // namespace tvyw
