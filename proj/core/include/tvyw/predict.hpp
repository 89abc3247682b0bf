#pragma once

#include "tvyw/estimator.hpp"
#include "tvyw/series.hpp"
#include "tvyw/taper.hpp"

#include <functional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace tvyw {

enum class PredictorKind { Raw, BiasReduced, OracleLocal };
std::string_view to_string(PredictorKind k) noexcept;

struct PredictionRecord
{
  TimeIndex t = 0;
  double forecast = 0.0;
  double actual = 0.0;
  double squared_error = 0.0;
  PredictorKind kind = PredictorKind::Raw;
};

//! sum_k theta[k] history[k], history ordered most recent first.
double linear_predict(std::span<const double> theta, std::span<const double> history);

struct RollingForecastOptions
{
  TimeIndex T = 0;
  int d = 1;
  Taper taper = rectangular_taper();
  double beta = 1.0;
  int M = 2;
  TimeRange t_range;
  bool use_bias_reduction = false;
  int stride = 1; //!< re-estimate coefficients every `stride` steps
};

//! For each t in t_range, estimates theta from samples before t (causal
//! window), forecasts X_t and records the squared error.
//! Throws WindowOutOfRange if the series lacks the history required.
std::vector<PredictionRecord> rolling_forecast(const Series& x, const RollingForecastOptions& opt);

//! Predicts with known coefficients theta(t/T); the OracleLocal benchmark.
std::vector<PredictionRecord> oracle_forecast(
  const Series& x,
  TimeIndex T,
  TimeRange t_range,
  const std::function<std::vector<double>(double)>& theta_path);

double mean_squared_error(std::span<const PredictionRecord> records);

//! Columns: t,forecast,actual,squared_error,estimator_kind.
void write_predictions_csv(std::ostream& out, std::span<const PredictionRecord> records);

} // namespace tvyw
