#pragma once

#include "tvyw/estimator.hpp"
#include "tvyw/tvar.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tvyw {

struct ExperimentConfig
{
  int p = 3;
  int d = 3;
  int F = 5;
  double delta = 0.9;
  double beta = 3.0;
  std::vector<TimeIndex> T_grid;
  std::optional<std::vector<int>> M_grid; //!< nullopt: auto_bandwidth_grid per T
  int n_replicates = 100;
  double u_eval = 0.5;
  std::string taper_name = "rectangular";
  std::uint64_t master_seed = 0;
};

//! Throws Error(ConfigError) with the offending field.
void validate(const ExperimentConfig& cfg);

//! Powers of two from 2^6 up to T/2.
std::vector<int> auto_bandwidth_grid(TimeIndex T);

//! Bandwidths used at sample size T: the configured grid (or the auto grid)
//! restricted to d < M <= T.
std::vector<int> bandwidth_grid(const ExperimentConfig& cfg, TimeIndex T);

//! The random TVAR model of an experiment (sigma == 1), drawn from a seed
//! derived from master_seed.
TvarModel experiment_model(const ExperimentConfig& cfg);

//! Seed of replicate r at sample size T; independent of n_replicates.
std::uint64_t replicate_seed(std::uint64_t master_seed, TimeIndex T, int replicate);

struct LossRow
{
  TimeIndex T;
  int M;
  int replicate;
  EstimateKind kind;
  double loss;
};

struct OracleRow
{
  TimeIndex T;
  int replicate;
  EstimateKind kind;
  double loss;
  int best_M;
};

struct RatioRow
{
  TimeIndex T;
  int replicate;
  double ratio;
};

struct RateFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct ExperimentResult
{
  std::vector<double> truth; //!< theta(u_eval)
  std::vector<LossRow> losses;
  std::vector<OracleRow> oracle;
  std::vector<RatioRow> ratio;
  std::map<EstimateKind, RateFit> rate_fit; //!< empty when fewer than 3 T values
};

//! Monte Carlo comparison of raw and bias-reduced estimates of theta(u_eval).
//! Work is spread over `threads` workers (0: TVYW_THREADS or hardware
//! concurrency); results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 0);

//! Same protocol on a caller-supplied model.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const TvarModel& model, int threads = 0);

//! OLS of log(loss) on log(T). Throws DegenerateRegression for fewer than three
//! distinct T or a non-positive loss.
RateFit rate_regression(std::span<const std::pair<double, double>> points);

//! Median over replicates of the oracle loss, per T, for one estimator kind.
std::vector<std::pair<double, double>> median_oracle_losses(const ExperimentResult& r, EstimateKind kind);

//! Median loss over replicates for each M at one T.
std::map<int, double> median_losses_by_bandwidth(const ExperimentResult& r, TimeIndex T, EstimateKind kind);

double quantile(std::vector<double> values, double q);

//! Sample covariance of (X_{t,T}, X_{t-ell,T}) across independent realizations.
double ensemble_covariance(const TvarModel& model,
                           TimeIndex T,
                           TimeIndex t,
                           int ell,
                           int n_replicates,
                           std::uint64_t seed);

struct CovarianceGap
{
  std::vector<double> gap;       //!< estimate of gamma*(t,T,l) - gamma(t/T,l), l = 0..max_lag
  std::vector<double> std_error; //!< Monte Carlo standard error of each gap
};

//! Control-variate estimate of gamma*(t,T,l) - gamma(t/T,l): each realization
//! is paired with the stationary process frozen at u = t/T driven by the same
//! innovations, whose covariance is known exactly. Pairing removes most of the
//! Monte Carlo noise that would swamp an O(1/T) gap.
CovarianceGap ensemble_covariance_gap(const TvarModel& model,
                                      TimeIndex T,
                                      TimeIndex t,
                                      int max_lag,
                                      int n_replicates,
                                      std::uint64_t seed);

void write_losses_csv(std::ostream& out, const ExperimentResult& r);
void write_oracle_csv(std::ostream& out, const ExperimentResult& r);
void write_ratio_csv(std::ostream& out, const ExperimentResult& r);
void write_rates_csv(std::ostream& out, const ExperimentResult& r);

//! Medians, quartiles and fitted slopes.
nlohmann::json experiment_summary(const ExperimentResult& r);

//! Worker count from TVYW_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

} // namespace tvyw
