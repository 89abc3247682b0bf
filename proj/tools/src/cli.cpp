#include "cli.hpp"

#include "rational.hpp"

#include "tvyw/error.hpp"
#include "tvyw/estimator.hpp"
#include "tvyw/experiment.hpp"
#include "tvyw/io.hpp"
#include "tvyw/predict.hpp"
#include "tvyw/random.hpp"
#include "tvyw/taper.hpp"
#include "tvyw/tvar.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace tvyw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656cULL;

struct Options
{
  std::string config_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  int verbosity = 0;
  int threads = 0;
  int k = 0;
  bool symmetric = false;
};

[[noreturn]] void
config_error(const std::string& what)
{
  throw Error(ErrorCode::ConfigError, what);
}

int
exit_code_for(ErrorCode code)
{
  switch (code) {
    case ErrorCode::NumericalSingularity:
    case ErrorCode::NonFiniteSample:
    case ErrorCode::DegenerateRegression:
      return kNumericalError;
    default:
      return kUsageError;
  }
}

void
check_keys(const json& doc, const std::set<std::string>& known, const std::string& what)
{
  if (!doc.is_object())
    config_error(what + " config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key))
      config_error("unknown " + what + " field '" + key + "'");
  }
}

template <typename T>
T
field(const json& doc, const char* key)
{
  if (!doc.contains(key))
    config_error(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T
field(const json& doc, const char* key, T fallback)
{
  return doc.contains(key) && !doc.at(key).is_null() ? field<T>(doc, key) : fallback;
}

// A manifest written by an earlier run is accepted in place of its config.
json
load_config(const std::string& path, const std::string& command)
{
  json doc = read_json_file(path);
  if (doc.is_object() && doc.contains("command") && doc.contains("config")) {
    if (doc.at("command") != command)
      config_error("manifest '" + path + "' was written by '" + doc.at("command").get<std::string>() +
                   "', not '" + command + "'");
    return doc.at("config");
  }
  return doc;
}

fs::path
prepare_output_dir(const std::string& dir)
{
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec)
    config_error("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

std::ofstream
open_output(const fs::path& path)
{
  std::ofstream out(path);
  if (!out)
    config_error("cannot write '" + path.string() + "'");
  return out;
}

void
write_manifest(const fs::path& dir, const std::string& command, const json& config, const json& seeds)
{
  json manifest{ { "command", command },
                 { "version", library_version() },
                 { "config", config },
                 { "seeds", seeds } };
  write_json_file(dir / "manifest.json", manifest);
}

std::string
resolve_path(const std::string& config_path, const std::string& p)
{
  fs::path candidate(p);
  if (candidate.is_relative())
    candidate = fs::path(config_path).parent_path() / candidate;
  return fs::weakly_canonical(fs::absolute(candidate)).string();
}

Series
load_series(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    config_error("cannot open series '" + path + "'");
  return read_series_csv(in);
}

int
cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err)
{
  json cfg = load_config(opt.config_path, "simulate");
  check_keys(cfg, { "model", "T", "t_first", "t_last", "burn_in", "seed" }, "simulate");

  const auto master = opt.seed ? *opt.seed : field<std::uint64_t>(cfg, "seed", 0);
  json model_doc = field<json>(cfg, "model");
  if (model_doc.is_object() && model_doc.value("kind", "") == "random_pacf" && !model_doc.contains("seed"))
    model_doc["seed"] = derive_seed({ master, kModelStream });
  const TvarModel model = model_from_json(model_doc);

  const auto T = field<TimeIndex>(cfg, "T");
  if (T < 1)
    config_error("T must be positive");
  const TimeRange range{ field<TimeIndex>(cfg, "t_first", 1), field<TimeIndex>(cfg, "t_last", T) };
  if (range.size() == 0)
    config_error("empty range [t_first, t_last]");
  const int burn_in = field<int>(cfg, "burn_in", std::max(kDefaultBurnIn, minimum_burn_in(model.delta())));

  if (opt.verbosity > 0)
    err << "simulating " << range.size() << " samples, T = " << T << ", seed = " << master << '\n';
  const Series x = simulate(model, T, range, burn_in, master);

  const fs::path dir = prepare_output_dir(opt.output_dir);
  {
    auto f = open_output(dir / "series.csv");
    write_series_csv(f, x);
  }
  const json resolved_model = model_to_json(model.spec());
  write_json_file(dir / "model.json", resolved_model);

  json resolved{ { "model", resolved_model },
                 { "T", T },
                 { "t_first", range.first },
                 { "t_last", range.last },
                 { "burn_in", burn_in },
                 { "seed", master } };
  json seeds{ { "master", master }, { "innovations", master } };
  if (model.spec().seed)
    seeds["model"] = *model.spec().seed;
  write_manifest(dir, "simulate", resolved, seeds);
  out << "wrote " << x.size() << " samples to " << (dir / "series.csv").string() << '\n';
  return kSuccess;
}

json
estimate_to_json(const CoefficientEstimate& e)
{
  std::vector<double> weights(e.weights.begin(), e.weights.end());
  return json{ { "kind", std::string(to_string(e.kind)) },
               { "M", e.M },
               { "bandwidths", e.bandwidths },
               { "weights", weights },
               { "theta", e.theta },
               { "degenerate", e.degenerate } };
}

int
cmd_estimate(const Options& opt, std::ostream& out, std::ostream&)
{
  json cfg = load_config(opt.config_path, "estimate");
  check_keys(cfg, { "series", "T", "t_center", "u", "M", "d", "taper", "beta", "alignment" }, "estimate");

  const std::string series_path = resolve_path(opt.config_path, field<std::string>(cfg, "series"));
  const Series x = load_series(series_path);
  const auto T = field<TimeIndex>(cfg, "T", x.last());
  if (T < 1)
    config_error("T must be positive");
  TimeIndex t_center = 0;
  if (cfg.contains("t_center"))
    t_center = field<TimeIndex>(cfg, "t_center");
  else
    t_center = static_cast<TimeIndex>(std::floor(field<double>(cfg, "u", 0.5) * static_cast<double>(T)));
  const int M = field<int>(cfg, "M");
  const int d = field<int>(cfg, "d", 1);
  const std::string taper_name = field<std::string>(cfg, "taper", "rectangular");
  const Taper h = taper_by_name(taper_name);
  const Alignment alignment = alignment_from_string(field<std::string>(cfg, "alignment", "centered"));
  const std::optional<double> beta =
    cfg.contains("beta") && !cfg.at("beta").is_null() ? std::optional(field<double>(cfg, "beta")) : std::nullopt;

  std::vector<CoefficientEstimate> estimates;
  estimates.push_back(raw_estimate(x, t_center, T, M, h, d, alignment));
  if (beta)
    estimates.push_back(bias_reduced_estimate(x, t_center, T, M, h, d, *beta, alignment));

  const fs::path dir = prepare_output_dir(opt.output_dir);
  {
    auto f = open_output(dir / "estimate.csv");
    f << "kind,M,coefficient,theta\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& e : estimates) {
      for (std::size_t j = 0; j < e.theta.size(); ++j)
        f << to_string(e.kind) << ',' << e.M << ',' << j + 1 << ',' << e.theta[j] << '\n';
    }
  }
  json doc{ { "T", T },
            { "t_center", t_center },
            { "u", static_cast<double>(t_center) / static_cast<double>(T) },
            { "d", d },
            { "taper", taper_name },
            { "alignment", std::string(to_string(alignment)) },
            { "estimates", json::array() } };
  for (const auto& e : estimates)
    doc["estimates"].push_back(estimate_to_json(e));
  write_json_file(dir / "estimate.json", doc);

  json resolved{ { "series", series_path }, { "T", T },     { "t_center", t_center },
                 { "M", M },                { "d", d },     { "taper", taper_name },
                 { "alignment", std::string(to_string(alignment)) } };
  if (beta)
    resolved["beta"] = *beta;
  write_manifest(dir, "estimate", resolved, json::object());

  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : estimates) {
    out << to_string(e.kind);
    for (double v : e.theta)
      out << ' ' << v;
    out << '\n';
  }
  return kSuccess;
}

int
cmd_forecast(const Options& opt, std::ostream& out, std::ostream& err)
{
  json cfg = load_config(opt.config_path, "forecast");
  check_keys(cfg,
             { "series", "T", "d", "M", "taper", "beta", "bias_reduction", "t_first", "t_last", "stride", "model" },
             "forecast");

  const std::string series_path = resolve_path(opt.config_path, field<std::string>(cfg, "series"));
  const Series x = load_series(series_path);

  RollingForecastOptions fo;
  fo.T = field<TimeIndex>(cfg, "T", x.last());
  fo.d = field<int>(cfg, "d", 1);
  fo.M = field<int>(cfg, "M");
  const std::string taper_name = field<std::string>(cfg, "taper", "rectangular");
  fo.taper = taper_by_name(taper_name);
  fo.beta = field<double>(cfg, "beta", 1.0);
  fo.use_bias_reduction = field<bool>(cfg, "bias_reduction", false);
  fo.stride = field<int>(cfg, "stride", 1);
  fo.t_range = { field<TimeIndex>(cfg, "t_first"), field<TimeIndex>(cfg, "t_last", x.last()) };

  if (opt.verbosity > 0)
    err << "forecasting t = " << fo.t_range.first << ".." << fo.t_range.last << '\n';
  std::vector<PredictionRecord> records = rolling_forecast(x, fo);

  std::optional<TvarModel> model;
  if (cfg.contains("model") && !cfg.at("model").is_null()) {
    model.emplace(model_from_json(cfg.at("model")));
    auto oracle = oracle_forecast(x, fo.T, fo.t_range, [&](double u) { return model->theta(u); });
    records.insert(records.end(), oracle.begin(), oracle.end());
  }

  const fs::path dir = prepare_output_dir(opt.output_dir);
  {
    auto f = open_output(dir / "predictions.csv");
    write_predictions_csv(f, records);
  }

  std::map<std::string, std::vector<PredictionRecord>> by_kind;
  for (const auto& r : records)
    by_kind[std::string(to_string(r.kind))].push_back(r);
  json summary = json::object();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& [kind, recs] : by_kind) {
    const double mse = mean_squared_error(recs);
    summary[kind] = { { "n", recs.size() }, { "mse", mse } };
    out << kind << " mse " << mse << " (n = " << recs.size() << ")\n";
  }
  write_json_file(dir / "forecast.json", summary);

  json resolved{ { "series", series_path },
                 { "T", fo.T },
                 { "d", fo.d },
                 { "M", fo.M },
                 { "taper", taper_name },
                 { "beta", fo.beta },
                 { "bias_reduction", fo.use_bias_reduction },
                 { "t_first", fo.t_range.first },
                 { "t_last", fo.t_range.last },
                 { "stride", fo.stride } };
  if (model)
    resolved["model"] = model_to_json(model->spec());
  write_manifest(dir, "forecast", resolved, json::object());
  return kSuccess;
}

int
cmd_experiment(const Options& opt, std::ostream& out, std::ostream& err)
{
  ExperimentConfig cfg = config_from_json(load_config(opt.config_path, "experiment"));
  if (opt.seed)
    cfg.master_seed = *opt.seed;
  const int threads = opt.threads > 0 ? opt.threads : default_thread_count();
  if (opt.verbosity > 0)
    err << "experiment: " << cfg.T_grid.size() << " sample sizes, " << cfg.n_replicates << " replicates, "
        << threads << " threads\n";

  const TvarModel model = experiment_model(cfg);
  const ExperimentResult result = run_experiment(cfg, model, threads);

  const fs::path dir = prepare_output_dir(opt.output_dir);
  {
    auto f = open_output(dir / "losses.csv");
    write_losses_csv(f, result);
  }
  {
    auto f = open_output(dir / "oracle.csv");
    write_oracle_csv(f, result);
  }
  {
    auto f = open_output(dir / "ratio.csv");
    write_ratio_csv(f, result);
  }
  {
    auto f = open_output(dir / "rates.csv");
    write_rates_csv(f, result);
  }
  json summary = experiment_summary(result);
  summary["model"] = model_to_json(model.spec());
  write_json_file(dir / "summary.json", summary);

  json seeds{ { "master", cfg.master_seed } };
  if (model.spec().seed)
    seeds["model"] = *model.spec().seed;
  write_manifest(dir, "experiment", config_to_json(cfg), seeds);

  out << "wrote " << result.losses.size() << " loss rows to " << dir.string() << '\n';
  for (const auto& [kind, fit] : result.rate_fit)
    out << to_string(kind) << " slope " << fit.slope << '\n';
  return kSuccess;
}

int
cmd_weights(const Options& opt, std::ostream& out)
{
  if (opt.k < 0)
    config_error("k must be >= 0");
  const auto w = romberg_weights(opt.k, opt.symmetric);

  std::ostringstream decimal;
  decimal << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < w.size(); ++j)
    decimal << (j ? " " : "") << static_cast<double>(w[j]);
  out << decimal.str() << '\n';

  std::vector<std::string> exact;
  for (long double v : w) {
    const auto f = to_fraction(v, 1000000);
    if (!f)
      return kSuccess;
    exact.push_back(format_fraction(*f));
  }
  std::string rational;
  for (std::size_t j = 0; j < exact.size(); ++j)
    rational += (j ? " " : "") + exact[j];
  if (rational != decimal.str())
    out << rational << '\n';
  return kSuccess;
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Tapered local Yule-Walker estimation for time-varying AR processes", "tvyw" };
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("-c,--config", opt.config_path, "JSON config or manifest");
    if (needs_config)
      c->required();
    sub->add_option("-o,--output-dir", opt.output_dir, "Directory for output files");
    sub->add_option("-s,--seed", opt.seed, "Override the master seed");
    sub->add_flag("-v,--verbose", opt.verbosity, "More progress output");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a TVAR series");
  add_common(simulate_cmd, true);
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate local AR coefficients at one time");
  add_common(estimate_cmd, true);
  auto* forecast_cmd = app.add_subcommand("forecast", "Rolling one-step-ahead forecasts");
  add_common(forecast_cmd, true);
  auto* experiment_cmd = app.add_subcommand("experiment", "Monte Carlo comparison of the estimators");
  add_common(experiment_cmd, true);
  experiment_cmd->add_option("-j,--threads", opt.threads, "Worker threads (default: TVYW_THREADS or all cores)");
  auto* weights_cmd = app.add_subcommand("weights", "Print Romberg weights");
  weights_cmd->add_option("-k,--k", opt.k, "Romberg order")->required();
  weights_cmd->add_flag("--symmetric", opt.symmetric, "Weights for a symmetric taper");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty())
    reversed.pop_back(); // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  }

  try {
    if (simulate_cmd->parsed())
      return cmd_simulate(opt, out, err);
    if (estimate_cmd->parsed())
      return cmd_estimate(opt, out, err);
    if (forecast_cmd->parsed())
      return cmd_forecast(opt, out, err);
    if (experiment_cmd->parsed())
      return cmd_experiment(opt, out, err);
    if (weights_cmd->parsed())
      return cmd_weights(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

int
run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

} // namespace tvyw::cli
