#include "tvyw/experiment.hpp"

#include "tvyw/error.hpp"
#include "tvyw/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace tvyw {

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656cULL;     // "model"
constexpr std::uint64_t kReplicateStream = 0x7265706cULL;   // "repl"

void
config_error(const std::string& what)
{
  throw Error(ErrorCode::ConfigError, what);
}

int
experiment_burn_in(double delta)
{
  return std::max(kDefaultBurnIn, minimum_burn_in(delta));
}

TimeIndex
eval_index(const ExperimentConfig& cfg, TimeIndex T)
{
  return static_cast<TimeIndex>(std::floor(cfg.u_eval * static_cast<double>(T)));
}

// Runs fn(i) for i in [0, n) on `threads` workers; rethrows the first failure.
template <typename Fn>
void
parallel_for(std::size_t n, int threads, Fn&& fn)
{
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next.store(n);
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (int w = 0; w < count; ++w)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
  }
  if (failure)
    std::rethrow_exception(failure);
}

struct CellPlan
{
  TimeIndex T;
  TimeIndex t_center;
  std::vector<int> Ms;
  std::vector<int> bands; // union of all bandwidths needed
  TimeRange sim_range;
  std::shared_ptr<const CoefficientPath> path;
};

struct ReplicateOutput
{
  std::vector<LossRow> losses;
  OracleRow oracle_raw;
  OracleRow oracle_br;
};

} // namespace

void
validate(const ExperimentConfig& cfg)
{
  if (cfg.p < 1)
    config_error("p must be >= 1");
  if (cfg.d < 1)
    config_error("d must be >= 1");
  if (cfg.F < 2)
    config_error("F must be >= 2");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    config_error("delta must lie in (0, 1)");
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta))
    config_error("beta must be positive");
  if (cfg.T_grid.empty())
    config_error("T_grid must not be empty");
  for (auto T : cfg.T_grid) {
    if (T < 4)
      config_error("every T must be >= 4");
  }
  if (cfg.M_grid) {
    if (cfg.M_grid->empty())
      config_error("M_grid must not be empty");
    for (int M : *cfg.M_grid) {
      if (M < 2 || M % 2 != 0)
        config_error("every M must be even and >= 2, got " + std::to_string(M));
    }
  }
  if (cfg.n_replicates < 1)
    config_error("n_replicates must be >= 1");
  if (!(cfg.u_eval > 0.0 && cfg.u_eval < 1.0))
    config_error("u_eval must lie in (0, 1)");
  try {
    (void)taper_by_name(cfg.taper_name);
  } catch (const Error& e) {
    config_error(e.what());
  }
}

std::vector<int>
auto_bandwidth_grid(TimeIndex T)
{
  std::vector<int> out;
  for (long long M = 64; M <= T / 2 && M <= (1LL << 29); M *= 2)
    out.push_back(static_cast<int>(M));
  return out;
}

std::vector<int>
bandwidth_grid(const ExperimentConfig& cfg, TimeIndex T)
{
  const auto base = cfg.M_grid ? *cfg.M_grid : auto_bandwidth_grid(T);
  std::vector<int> out;
  for (int M : base) {
    if (M > cfg.d && M <= T)
      out.push_back(M);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TvarModel
experiment_model(const ExperimentConfig& cfg)
{
  return random_model(cfg.p, cfg.F, cfg.delta, SigmaSpec{}, derive_seed({ cfg.master_seed, kModelStream }));
}

std::uint64_t
replicate_seed(std::uint64_t master_seed, TimeIndex T, int replicate)
{
  return derive_seed({ master_seed, kReplicateStream, static_cast<std::uint64_t>(T),
                       static_cast<std::uint64_t>(replicate) });
}

ExperimentResult
run_experiment(const ExperimentConfig& cfg, int threads)
{
  validate(cfg);
  return run_experiment(cfg, experiment_model(cfg), threads);
}

ExperimentResult
run_experiment(const ExperimentConfig& cfg, const TvarModel& model, int threads)
{
  validate(cfg);
  if (threads <= 0)
    threads = default_thread_count();

  const Taper taper = taper_by_name(cfg.taper_name);
  const bool symmetric = taper.is_symmetric();
  const int k = romberg_order(cfg.beta);
  const auto weights = romberg_weights(k, symmetric);
  const int burn_in = experiment_burn_in(model.delta());

  ExperimentResult result;
  result.truth = model.theta(cfg.u_eval);
  if (static_cast<int>(result.truth.size()) != cfg.d) {
    // Losses compare d-dimensional estimates with theta(u); pad or fail.
    if (static_cast<int>(result.truth.size()) > cfg.d)
      config_error("prediction order d is smaller than the model order");
    result.truth.resize(cfg.d, 0.0);
  }

  // Tabulate each T's coefficient path once; replicates share it.
  std::vector<CellPlan> plans;
  for (TimeIndex T : cfg.T_grid) {
    CellPlan plan;
    plan.T = T;
    plan.t_center = eval_index(cfg, T);
    plan.Ms = bandwidth_grid(cfg, T);
    if (plan.Ms.empty())
      config_error("no valid bandwidth for T = " + std::to_string(T));
    std::set<int> bands;
    for (int M : plan.Ms) {
      for (int b : romberg_bandwidths(M, cfg.beta, symmetric))
        bands.insert(b);
    }
    plan.bands.assign(bands.begin(), bands.end());
    plan.sim_range = window_range(plan.t_center, plan.bands.back(), Alignment::Centered);
    plan.path = std::make_shared<CoefficientPath>(
      model, T, TimeRange{ plan.sim_range.first - burn_in, plan.sim_range.last });
    plans.push_back(std::move(plan));
  }

  const std::size_t n_rep = static_cast<std::size_t>(cfg.n_replicates);
  std::vector<ReplicateOutput> outputs(plans.size() * n_rep);

  parallel_for(outputs.size(), threads, [&](std::size_t task) {
    const CellPlan& plan = plans[task / n_rep];
    const int r = static_cast<int>(task % n_rep);
    const auto x = simulate(*plan.path, plan.sim_range, burn_in, replicate_seed(cfg.master_seed, plan.T, r));

    std::map<int, CoefficientEstimate> raw;
    for (int b : plan.bands) {
      try {
        raw.emplace(b, raw_estimate(x, plan.t_center, plan.T, b, taper, cfg.d, Alignment::Centered));
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " [T=" + std::to_string(plan.T) +
                                " M=" + std::to_string(b) + " replicate=" + std::to_string(r) + "]");
      }
    }

    ReplicateOutput& out = outputs[task];
    out.oracle_raw = { plan.T, r, EstimateKind::Raw, std::numeric_limits<double>::infinity(), 0 };
    out.oracle_br = { plan.T, r, EstimateKind::BiasReduced, std::numeric_limits<double>::infinity(), 0 };
    for (int M : plan.Ms) {
      std::vector<CoefficientEstimate> ladder;
      for (int b : romberg_bandwidths(M, cfg.beta, symmetric))
        ladder.push_back(raw.at(b));
      const auto br = combine_estimates(ladder, weights);
      const double loss_raw = estimation_loss(raw.at(M), result.truth);
      const double loss_br = estimation_loss(br, result.truth);
      out.losses.push_back({ plan.T, M, r, EstimateKind::Raw, loss_raw });
      out.losses.push_back({ plan.T, M, r, EstimateKind::BiasReduced, loss_br });
      if (loss_raw < out.oracle_raw.loss)
        out.oracle_raw = { plan.T, r, EstimateKind::Raw, loss_raw, M };
      if (loss_br < out.oracle_br.loss)
        out.oracle_br = { plan.T, r, EstimateKind::BiasReduced, loss_br, M };
    }
  });

  for (auto& out : outputs) {
    result.losses.insert(result.losses.end(), out.losses.begin(), out.losses.end());
    result.oracle.push_back(out.oracle_raw);
    result.oracle.push_back(out.oracle_br);
    result.ratio.push_back({ out.oracle_raw.T, out.oracle_raw.replicate,
                             out.oracle_br.loss / out.oracle_raw.loss });
  }

  std::set<TimeIndex> distinct(cfg.T_grid.begin(), cfg.T_grid.end());
  if (distinct.size() >= 3) {
    for (auto kind : { EstimateKind::Raw, EstimateKind::BiasReduced }) {
      const auto pts = median_oracle_losses(result, kind);
      bool positive = std::all_of(pts.begin(), pts.end(), [](const auto& pt) { return pt.second > 0.0; });
      if (positive)
        result.rate_fit[kind] = rate_regression(pts);
    }
  }
  return result;
}

RateFit
rate_regression(std::span<const std::pair<double, double>> points)
{
  std::set<double> distinct;
  for (const auto& [T, loss] : points) {
    if (!(loss > 0.0) || !(T > 0.0))
      throw Error(ErrorCode::DegenerateRegression, "log-log regression needs positive T and loss");
    distinct.insert(T);
  }
  if (distinct.size() < 3)
    throw Error(ErrorCode::DegenerateRegression, "log-log regression needs at least three distinct T");

  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [T, loss] : points) {
    sx += std::log(T);
    sy += std::log(loss);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [T, loss] : points) {
    const double dx = std::log(T) - mx, dy = std::log(loss) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double
quantile(std::vector<double> values, double q)
{
  if (values.empty())
    return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<std::pair<double, double>>
median_oracle_losses(const ExperimentResult& r, EstimateKind kind)
{
  std::map<TimeIndex, std::vector<double>> by_t;
  for (const auto& row : r.oracle) {
    if (row.kind == kind)
      by_t[row.T].push_back(row.loss);
  }
  std::vector<std::pair<double, double>> out;
  for (auto& [T, losses] : by_t)
    out.emplace_back(static_cast<double>(T), quantile(std::move(losses), 0.5));
  return out;
}

std::map<int, double>
median_losses_by_bandwidth(const ExperimentResult& r, TimeIndex T, EstimateKind kind)
{
  std::map<int, std::vector<double>> by_m;
  for (const auto& row : r.losses) {
    if (row.T == T && row.kind == kind)
      by_m[row.M].push_back(row.loss);
  }
  std::map<int, double> out;
  for (auto& [M, losses] : by_m)
    out[M] = quantile(std::move(losses), 0.5);
  return out;
}

double
ensemble_covariance(const TvarModel& model,
                    TimeIndex T,
                    TimeIndex t,
                    int ell,
                    int n_replicates,
                    std::uint64_t seed)
{
  if (n_replicates < 2)
    throw Error(ErrorCode::InvalidArgument, "ensemble covariance needs at least 2 replicates");
  const int lag = std::abs(ell);
  const int burn_in = experiment_burn_in(model.delta());
  const TimeRange range{ t - lag, t };
  const CoefficientPath path(model, T, { range.first - burn_in, range.last });

  double sa = 0.0, sb = 0.0, sab = 0.0;
  for (int r = 0; r < n_replicates; ++r) {
    const auto x = simulate(path, range, burn_in, derive_seed({ seed, static_cast<std::uint64_t>(r) }));
    const double a = x[t], b = x[t - lag];
    sa += a;
    sb += b;
    sab += a * b;
  }
  const double n = n_replicates;
  return (sab - sa * sb / n) / (n - 1.0);
}

CovarianceGap
ensemble_covariance_gap(const TvarModel& model,
                        TimeIndex T,
                        TimeIndex t,
                        int max_lag,
                        int n_replicates,
                        std::uint64_t seed)
{
  if (n_replicates < 2)
    throw Error(ErrorCode::InvalidArgument, "ensemble covariance needs at least 2 replicates");
  if (max_lag < 0)
    throw Error(ErrorCode::InvalidArgument, "max_lag must be >= 0");
  const double u = static_cast<double>(t) / static_cast<double>(T);
  const TvarModel frozen = model.frozen(u);
  const int burn_in = experiment_burn_in(model.delta());
  const TimeRange range{ t - max_lag, t };
  const TimeRange full{ range.first - burn_in, range.last };
  const CoefficientPath path(model, T, full);
  const CoefficientPath frozen_path(frozen, T, full);

  const auto L = static_cast<std::size_t>(max_lag) + 1;
  // Per-lag sums for the mean-corrected sample covariance of the paired
  // difference X_t X_{t-l} - Y_t Y_{t-l}.
  std::vector<double> sum_d(L, 0.0), sum_d2(L, 0.0);
  double sxa = 0.0, sya = 0.0;
  std::vector<double> sxb(L, 0.0), syb(L, 0.0);
  for (int r = 0; r < n_replicates; ++r) {
    const auto s = derive_seed({ seed, static_cast<std::uint64_t>(r) });
    const auto x = simulate(path, range, burn_in, s);
    const auto y = simulate(frozen_path, range, burn_in, s);
    sxa += x[t];
    sya += y[t];
    for (std::size_t l = 0; l < L; ++l) {
      const auto tl = t - static_cast<TimeIndex>(l);
      const double dv = x[t] * x[tl] - y[t] * y[tl];
      sum_d[l] += dv;
      sum_d2[l] += dv * dv;
      sxb[l] += x[tl];
      syb[l] += y[tl];
    }
  }
  const double n = n_replicates;

  CovarianceGap out;
  out.gap.resize(L);
  out.std_error.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    // Difference of the two mean-corrected sample covariances; the frozen
    // member has expectation gamma(u, l), so this is unbiased for the gap.
    const double mean_d = sum_d[l] / n;
    const double corr = (sxa * sxb[l] - sya * syb[l]) / (n * (n - 1.0));
    out.gap[l] = n / (n - 1.0) * mean_d - corr;
    const double var_d = std::max(0.0, sum_d2[l] / n - mean_d * mean_d);
    out.std_error[l] = std::sqrt(var_d / n);
  }
  return out;
}

void
write_losses_csv(std::ostream& out, const ExperimentResult& r)
{
  out << "T,M,replicate,kind,loss\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : r.losses)
    out << row.T << ',' << row.M << ',' << row.replicate << ',' << to_string(row.kind) << ',' << row.loss << '\n';
}

void
write_oracle_csv(std::ostream& out, const ExperimentResult& r)
{
  out << "T,replicate,kind,loss,best_M\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : r.oracle)
    out << row.T << ',' << row.replicate << ',' << to_string(row.kind) << ',' << row.loss << ',' << row.best_M
        << '\n';
}

void
write_ratio_csv(std::ostream& out, const ExperimentResult& r)
{
  out << "T,replicate,ratio\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : r.ratio)
    out << row.T << ',' << row.replicate << ',' << row.ratio << '\n';
}

void
write_rates_csv(std::ostream& out, const ExperimentResult& r)
{
  out << "kind,slope,intercept,r_squared\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& [kind, fit] : r.rate_fit)
    out << to_string(kind) << ',' << fit.slope << ',' << fit.intercept << ',' << fit.r_squared << '\n';
}

nlohmann::json
experiment_summary(const ExperimentResult& r)
{
  using nlohmann::json;
  auto stats = [](std::vector<double> v) {
    return json{ { "n", v.size() },
                 { "q1", quantile(v, 0.25) },
                 { "median", quantile(v, 0.5) },
                 { "q3", quantile(v, 0.75) } };
  };

  json out;
  out["truth"] = r.truth;

  std::map<std::tuple<TimeIndex, int, EstimateKind>, std::vector<double>> cells;
  for (const auto& row : r.losses)
    cells[{ row.T, row.M, row.kind }].push_back(row.loss);
  out["losses"] = json::array();
  for (auto& [key, v] : cells) {
    auto s = stats(std::move(v));
    s["T"] = std::get<0>(key);
    s["M"] = std::get<1>(key);
    s["kind"] = to_string(std::get<2>(key));
    out["losses"].push_back(std::move(s));
  }

  std::map<std::pair<TimeIndex, EstimateKind>, std::vector<double>> oracle;
  for (const auto& row : r.oracle)
    oracle[{ row.T, row.kind }].push_back(row.loss);
  out["oracle"] = json::array();
  for (auto& [key, v] : oracle) {
    auto s = stats(std::move(v));
    s["T"] = key.first;
    s["kind"] = to_string(key.second);
    out["oracle"].push_back(std::move(s));
  }

  std::map<TimeIndex, std::vector<double>> ratio;
  for (const auto& row : r.ratio)
    ratio[row.T].push_back(row.ratio);
  out["ratio"] = json::array();
  for (auto& [T, v] : ratio) {
    const auto below = std::count_if(v.begin(), v.end(), [](double x) { return x <= 1.0; });
    const double frac = static_cast<double>(below) / static_cast<double>(v.size());
    auto s = stats(std::move(v));
    s["T"] = T;
    s["fraction_at_most_one"] = frac;
    out["ratio"].push_back(std::move(s));
  }

  out["rates"] = json::object();
  for (const auto& [kind, fit] : r.rate_fit)
    out["rates"][std::string(to_string(kind))] =
      json{ { "slope", fit.slope }, { "intercept", fit.intercept }, { "r_squared", fit.r_squared } };
  return out;
}

int
default_thread_count()
{
  if (const char* env = std::getenv("TVYW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0)
      return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace tvyw
