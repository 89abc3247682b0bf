#include "test_support.hpp"

#include "tvyw/error.hpp"
#include "tvyw/experiment.hpp"
#include "tvyw/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace tvyw;

namespace {

ExperimentConfig
small_config()
{
  ExperimentConfig cfg;
  cfg.T_grid = { 1024, 2048, 4096 };
  cfg.n_replicates = 4;
  cfg.master_seed = 17;
  return cfg;
}

std::string
all_tables(const ExperimentResult& r)
{
  std::ostringstream s;
  write_losses_csv(s, r);
  write_oracle_csv(s, r);
  write_ratio_csv(s, r);
  write_rates_csv(s, r);
  return s.str();
}

ErrorCode
code_of(const std::function<void()>& fn)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST(ExperimentConfig, Validation)
{
  auto check = [](auto mutate) {
    ExperimentConfig cfg = small_config();
    mutate(cfg);
    EXPECT_EQ(code_of([&] { validate(cfg); }), ErrorCode::ConfigError);
  };
  EXPECT_NO_THROW(validate(small_config()));
  check([](ExperimentConfig& c) { c.T_grid.clear(); });
  check([](ExperimentConfig& c) { c.M_grid = std::vector<int>{ 64, 65 }; });
  check([](ExperimentConfig& c) { c.M_grid = std::vector<int>{}; });
  check([](ExperimentConfig& c) { c.n_replicates = 0; });
  check([](ExperimentConfig& c) { c.u_eval = 1.0; });
  check([](ExperimentConfig& c) { c.delta = 1.0; });
  check([](ExperimentConfig& c) { c.beta = 0.0; });
  check([](ExperimentConfig& c) { c.taper_name = "hann"; });
  check([](ExperimentConfig& c) { c.d = 0; });
  check([](ExperimentConfig& c) { c.F = 1; });
}

TEST(BandwidthGrid, AutoAndFiltered)
{
  EXPECT_EQ(auto_bandwidth_grid(4096), (std::vector<int>{ 64, 128, 256, 512, 1024, 2048 }));
  EXPECT_TRUE(auto_bandwidth_grid(100).empty());
  ExperimentConfig cfg = small_config();
  cfg.M_grid = std::vector<int>{ 2, 8, 4096, 2048, 8 };
  EXPECT_EQ(bandwidth_grid(cfg, 2048), (std::vector<int>{ 8, 2048 }));
}

TEST(RunExperiment, DeterministicAndThreadIndependent)
{
  const ExperimentConfig cfg = small_config();
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 1);
  const auto c = run_experiment(cfg, 3);
  EXPECT_EQ(all_tables(a), all_tables(b));
  EXPECT_EQ(all_tables(a), all_tables(c));
  EXPECT_EQ(experiment_summary(a).dump(), experiment_summary(c).dump());
}

TEST(RunExperiment, ReplicatePrefixStable)
{
  ExperimentConfig cfg = small_config();
  const auto full = run_experiment(cfg, 1);
  cfg.n_replicates = 2;
  const auto half = run_experiment(cfg, 1);
  for (const auto& row : half.losses) {
    const auto it = std::find_if(full.losses.begin(), full.losses.end(), [&](const LossRow& f) {
      return f.T == row.T && f.M == row.M && f.replicate == row.replicate && f.kind == row.kind;
    });
    ASSERT_NE(it, full.losses.end());
    EXPECT_EQ(it->loss, row.loss);
  }
  EXPECT_EQ(replicate_seed(5, 1024, 3), replicate_seed(5, 1024, 3));
  EXPECT_NE(replicate_seed(5, 1024, 3), replicate_seed(5, 2048, 3));
}

TEST(RunExperiment, TablesConsistent)
{
  const ExperimentConfig cfg = small_config();
  const auto r = run_experiment(cfg, 1);
  EXPECT_EQ(r.truth, experiment_model(cfg).theta(0.5));
  EXPECT_EQ(r.oracle.size(), 2u * 3u * 4u);
  EXPECT_EQ(r.ratio.size(), 3u * 4u);
  for (const auto& o : r.oracle) {
    double best = INFINITY;
    for (const auto& l : r.losses)
      if (l.T == o.T && l.replicate == o.replicate && l.kind == o.kind) {
        EXPECT_LE(o.loss, l.loss);
        best = std::min(best, l.loss);
      }
    EXPECT_EQ(o.loss, best);
  }
  for (const auto& q : r.ratio)
    EXPECT_GT(q.ratio, 0.0);
  EXPECT_EQ(r.rate_fit.size(), 2u);
  const auto summary = experiment_summary(r);
  EXPECT_TRUE(summary.contains("losses"));
  EXPECT_TRUE(summary.contains("oracle"));
  EXPECT_TRUE(summary.contains("ratio"));
  EXPECT_TRUE(summary["rates"].contains("raw"));
}

TEST(RunExperiment, NoRateFitWithTwoSampleSizes)
{
  ExperimentConfig cfg = small_config();
  cfg.T_grid = { 1024, 2048 };
  cfg.n_replicates = 1;
  const auto r = run_experiment(cfg, 1);
  EXPECT_TRUE(r.rate_fit.empty());
  std::ostringstream s;
  write_rates_csv(s, r);
  EXPECT_EQ(s.str(), "kind,slope,intercept,r_squared\n");
}

TEST(RunExperiment, OrderBelowModelOrderRejected)
{
  ExperimentConfig cfg = small_config();
  cfg.d = 2;
  EXPECT_EQ(code_of([&] { run_experiment(cfg, 1); }), ErrorCode::ConfigError);
}

TEST(RunExperiment, WhiteNoiseSqrtRate)
{
  // a == 0 gives theta == 0: white noise.
  const TvarModel wn(ModelSpec{ PacfPathSpec{ 3, 5, Eigen::MatrixXd::Zero(4, 3), 0.9 }, {}, std::nullopt });
  ExperimentConfig cfg;
  cfg.T_grid = { 1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16 };
  cfg.n_replicates = 60;
  cfg.master_seed = 3;
  const auto r = run_experiment(cfg, wn, 1);
  std::vector<double> Ts, med;
  for (auto T : cfg.T_grid) {
    Ts.push_back(static_cast<double>(T));
    med.push_back(median_losses_by_bandwidth(r, T, EstimateKind::Raw).at(static_cast<int>(T / 4)));
  }
  EXPECT_NEAR(check::loglog_slope(Ts, med), -0.5, 0.15);
}

TEST(RateRegression, ExactLine)
{
  std::vector<std::pair<double, double>> pts;
  for (double T : { 8.0, 64.0, 1000.0, 5000.0 })
    pts.emplace_back(T, std::pow(T, -1.0 / 3.0));
  const auto fit = rate_regression(pts);
  EXPECT_NEAR(fit.slope, -1.0 / 3.0, 1e-10);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(RateRegression, Degenerate)
{
  const std::vector<std::pair<double, double>> one{ { 10.0, 1.0 }, { 10.0, 2.0 }, { 10.0, 3.0 } };
  EXPECT_EQ(code_of([&] { rate_regression(one); }), ErrorCode::DegenerateRegression);
  const std::vector<std::pair<double, double>> zero{ { 10.0, 1.0 }, { 20.0, 0.0 }, { 30.0, 3.0 } };
  EXPECT_EQ(code_of([&] { rate_regression(zero); }), ErrorCode::DegenerateRegression);
}

TEST(Quantile, TypeSeven)
{
  EXPECT_EQ(quantile({ 3.0, 1.0, 2.0 }, 0.5), 2.0);
  EXPECT_EQ(quantile({ 1.0, 2.0, 3.0, 4.0 }, 0.5), 2.5);
  EXPECT_EQ(quantile({ 1.0, 2.0, 3.0, 4.0, 5.0 }, 0.25), 2.0);
  EXPECT_TRUE(std::isnan(quantile({}, 0.5)));
}

TEST(EnsembleCovariance, WhiteNoiseLagOne)
{
  const TvarModel wn(ModelSpec{ ConstantCoefficients{ {} }, {}, std::nullopt });
  const int n = 20000;
  EXPECT_NEAR(ensemble_covariance(wn, 1000, 500, 1, n, 4), 0.0, 3.0 / std::sqrt(n));
}

TEST(EnsembleCovariance, Ar1Variance)
{
  const TvarModel m(ModelSpec{ ConstantCoefficients{ { 0.5 } }, {}, std::nullopt });
  const int n = 20000;
  // Var(X^2) = 2 gamma(0)^2 for a centred Gaussian.
  EXPECT_NEAR(ensemble_covariance(m, 1000, 500, 0, n, 5), 4.0 / 3.0, 3.0 * std::sqrt(2.0) * (4.0 / 3.0) / std::sqrt(n));
  EXPECT_THROW(ensemble_covariance(m, 1000, 500, 0, 1, 5), Error);
}

TEST(EnsembleCovarianceGap, VanishesForConstantModel)
{
  const TvarModel m(ModelSpec{ ConstantCoefficients{ { 0.5, -0.2 } }, {}, std::nullopt });
  const auto g = ensemble_covariance_gap(m, 1000, 500, 3, 200, 6);
  for (double v : g.gap)
    EXPECT_EQ(v, 0.0);
}

TEST(EnsembleCovarianceGap, ShrinksWithT)
{
  const TvarModel m(ModelSpec{ CosineCoefficients{ { 0.5 }, { 0.3 }, { 2.0 } }, {}, std::nullopt });
  std::vector<double> Ts, sup;
  for (TimeIndex T : { 256, 1024, 4096 }) {
    const auto g = ensemble_covariance_gap(m, T, T / 2, 3, 3000, 7);
    double s = 0.0;
    for (double v : g.gap)
      s = std::max(s, std::abs(v));
    Ts.push_back(static_cast<double>(T));
    sup.push_back(s);
  }
  EXPECT_LE(check::loglog_slope(Ts, sup), -0.7);
}

TEST(ResultCsv, Headers)
{
  ExperimentConfig cfg = small_config();
  cfg.n_replicates = 1;
  const auto r = run_experiment(cfg, 1);
  std::ostringstream l, o, q;
  write_losses_csv(l, r);
  write_oracle_csv(o, r);
  write_ratio_csv(q, r);
  EXPECT_EQ(l.str().substr(0, l.str().find('\n')), "T,M,replicate,kind,loss");
  EXPECT_EQ(o.str().substr(0, o.str().find('\n')), "T,replicate,kind,loss,best_M");
  EXPECT_EQ(q.str().substr(0, q.str().find('\n')), "T,replicate,ratio");
}
