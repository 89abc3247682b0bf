#pragma once

#include "tvyw/experiment.hpp"
#include "tvyw/series.hpp"
#include "tvyw/tvar.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

namespace tvyw {

std::string library_version();

//! Flat JSON model document:
//!   {"kind": "pacf", "p", "F", "a": [[..p..] x (F-1)], "delta",
//!    "sigma": {"level", "amplitude", "frequency"}, "seed"}
//!   {"kind": "constant", "theta": [..], "sigma": ..}
//!   {"kind": "cosine", "level": [..], "amplitude": [..], "frequency": [..], "sigma": ..}
//! On input, kind "random_pacf" with p, F, delta, seed draws the matrix a;
//! "sigma" may also be a plain number. Output always uses the resolved form,
//! so a written document reproduces the model exactly.
nlohmann::json model_to_json(const ModelSpec& spec);
TvarModel model_from_json(const nlohmann::json& doc);

//! Experiment configuration with exactly the ExperimentConfig fields;
//! M_grid may be "auto". Unknown keys are a ConfigError.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& doc);

//! Two columns t,x with a header line.
void write_series_csv(std::ostream& out, const Series& x);
//! Reads t,x rows; t must be consecutive integers.
Series read_series_csv(std::istream& in);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

} // namespace tvyw
