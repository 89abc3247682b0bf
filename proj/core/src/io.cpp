#include "tvyw/io.hpp"

#include "tvyw/error.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#ifndef TVYW_VERSION
#define TVYW_VERSION "0.0.0"
#endif

namespace tvyw {

using nlohmann::json;

namespace {

[[noreturn]] void
bad(const std::string& what)
{
  throw Error(ErrorCode::ConfigError, what);
}

template <typename T>
T
get_field(const json& doc, const char* key)
{
  if (!doc.contains(key))
    bad(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T
get_field(const json& doc, const char* key, T fallback)
{
  return doc.contains(key) ? get_field<T>(doc, key) : fallback;
}

SigmaSpec
sigma_from_json(const json& doc)
{
  if (!doc.contains("sigma"))
    return {};
  const auto& s = doc.at("sigma");
  if (s.is_number())
    return { s.get<double>(), 0.0, 0.0 };
  if (!s.is_object())
    bad("field 'sigma' must be a number or an object");
  return { get_field<double>(s, "level", 1.0), get_field<double>(s, "amplitude", 0.0),
           get_field<double>(s, "frequency", 0.0) };
}

} // namespace

std::string
library_version()
{
  return TVYW_VERSION;
}

json
model_to_json(const ModelSpec& spec)
{
  json doc = std::visit(
    [](const auto& s) -> json {
      using S = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<S, PacfPathSpec>) {
        json a = json::array();
        for (Eigen::Index j = 0; j < s.a.rows(); ++j) {
          json row = json::array();
          for (Eigen::Index k = 0; k < s.a.cols(); ++k)
            row.push_back(s.a(j, k));
          a.push_back(std::move(row));
        }
        return { { "kind", "pacf" }, { "p", s.p }, { "F", s.F }, { "a", std::move(a) }, { "delta", s.delta } };
      } else if constexpr (std::is_same_v<S, ConstantCoefficients>) {
        return { { "kind", "constant" }, { "theta", s.theta } };
      } else {
        return { { "kind", "cosine" }, { "level", s.level }, { "amplitude", s.amplitude }, { "frequency", s.frequency } };
      }
    },
    spec.coefficients);
  doc["sigma"] = { { "level", spec.sigma.level },
                   { "amplitude", spec.sigma.amplitude },
                   { "frequency", spec.sigma.frequency } };
  if (spec.seed)
    doc["seed"] = *spec.seed;
  return doc;
}

TvarModel
model_from_json(const json& doc)
{
  if (!doc.is_object())
    bad("model document must be a JSON object");
  const auto kind = get_field<std::string>(doc, "kind");
  const SigmaSpec sigma = sigma_from_json(doc);
  std::optional<std::uint64_t> seed;
  if (doc.contains("seed"))
    seed = get_field<std::uint64_t>(doc, "seed");

  try {
    if (kind == "random_pacf") {
      if (!seed)
        bad("random_pacf model needs a 'seed'");
      return random_model(get_field<int>(doc, "p"), get_field<int>(doc, "F", 5), get_field<double>(doc, "delta"),
                          sigma, *seed);
    }
    ModelSpec spec;
    spec.sigma = sigma;
    spec.seed = seed;
    if (kind == "pacf") {
      PacfPathSpec p;
      p.p = get_field<int>(doc, "p");
      p.F = get_field<int>(doc, "F");
      p.delta = get_field<double>(doc, "delta");
      if (p.p < 1 || p.F < 2)
        bad("pacf model needs p >= 1 and F >= 2");
      const auto rows = get_field<std::vector<std::vector<double>>>(doc, "a");
      if (static_cast<int>(rows.size()) != p.F - 1)
        bad("'a' must have F-1 rows");
      p.a.resize(p.F - 1, p.p);
      for (int j = 0; j < p.F - 1; ++j) {
        if (static_cast<int>(rows[j].size()) != p.p)
          bad("every row of 'a' must have p entries");
        for (int k = 0; k < p.p; ++k)
          p.a(j, k) = rows[j][k];
      }
      spec.coefficients = std::move(p);
    } else if (kind == "constant") {
      spec.coefficients = ConstantCoefficients{ get_field<std::vector<double>>(doc, "theta") };
    } else if (kind == "cosine") {
      spec.coefficients = CosineCoefficients{ get_field<std::vector<double>>(doc, "level"),
                                              get_field<std::vector<double>>(doc, "amplitude"),
                                              get_field<std::vector<double>>(doc, "frequency") };
    } else {
      bad("unknown model kind '" + kind + "'");
    }
    return TvarModel(std::move(spec));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError)
      throw;
    bad(std::string("invalid model: ") + e.what());
  }
}

json
config_to_json(const ExperimentConfig& cfg)
{
  json doc{ { "p", cfg.p },
            { "d", cfg.d },
            { "F", cfg.F },
            { "delta", cfg.delta },
            { "beta", cfg.beta },
            { "T_grid", cfg.T_grid },
            { "n_replicates", cfg.n_replicates },
            { "u_eval", cfg.u_eval },
            { "taper_name", cfg.taper_name },
            { "master_seed", cfg.master_seed } };
  if (cfg.M_grid)
    doc["M_grid"] = *cfg.M_grid;
  else
    doc["M_grid"] = "auto";
  return doc;
}

ExperimentConfig
config_from_json(const json& doc)
{
  if (!doc.is_object())
    bad("experiment config must be a JSON object");
  static const std::set<std::string> known{ "p",  "d",          "F",      "delta",      "beta",       "T_grid",
                                            "M_grid", "n_replicates", "u_eval", "taper_name", "master_seed" };
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key))
      bad("unknown experiment field '" + key + "'");
  }
  ExperimentConfig cfg;
  cfg.p = get_field<int>(doc, "p", cfg.p);
  cfg.d = get_field<int>(doc, "d", cfg.d);
  cfg.F = get_field<int>(doc, "F", cfg.F);
  cfg.delta = get_field<double>(doc, "delta", cfg.delta);
  cfg.beta = get_field<double>(doc, "beta", cfg.beta);
  cfg.T_grid = get_field<std::vector<TimeIndex>>(doc, "T_grid");
  if (doc.contains("M_grid") && !(doc.at("M_grid").is_string() && doc.at("M_grid") == "auto"))
    cfg.M_grid = get_field<std::vector<int>>(doc, "M_grid");
  cfg.n_replicates = get_field<int>(doc, "n_replicates", cfg.n_replicates);
  cfg.u_eval = get_field<double>(doc, "u_eval", cfg.u_eval);
  cfg.taper_name = get_field<std::string>(doc, "taper_name", cfg.taper_name);
  cfg.master_seed = get_field<std::uint64_t>(doc, "master_seed", cfg.master_seed);
  validate(cfg);
  return cfg;
}

void
write_series_csv(std::ostream& out, const Series& x)
{
  out << "t,x\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (TimeIndex t = x.first(); t <= x.last(); ++t)
    out << t << ',' << x[t] << '\n';
}

Series
read_series_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    bad("series CSV is empty");
  if (line.rfind("t,x", 0) != 0)
    bad("series CSV must start with header 't,x'");
  std::vector<double> values;
  TimeIndex first = 0;
  TimeIndex expected = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r")
      continue;
    std::istringstream row(line);
    TimeIndex t = 0;
    char comma = 0;
    double v = 0.0;
    if (!(row >> t >> comma >> v) || comma != ',')
      bad("malformed series CSV line " + std::to_string(lineno));
    if (values.empty())
      first = expected = t;
    if (t != expected)
      bad("series CSV time indices must be consecutive (line " + std::to_string(lineno) + ")");
    values.push_back(v);
    ++expected;
  }
  if (values.empty())
    bad("series CSV has no rows");
  return Series(first, std::move(values));
}

json
read_json_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    bad("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad("cannot parse '" + path.string() + "': " + e.what());
  }
}

void
write_json_file(const std::filesystem::path& path, const json& doc)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

} // namespace tvyw
