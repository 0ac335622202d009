#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsbf/fd_oracle.hpp"
#include "nsbf/model.hpp"
#include "nsbf/pipeline.hpp"
#include "nsbf/pricing.hpp"

namespace nsbf {

using Json = nlohmann::ordered_json;

struct ModelConfig {
    /// "ejdcev" or "heat".
    std::string kind = "ejdcev";
    double beta = -1.0;
    double gamma = 2.0;
    double sigma0 = 0.25;
    /// Spot used for calibration and for every price and Greek.
    double y0 = 100.0;
    double rbar = 0.1;
    double qbar = 0.0;
    double b = 0.02;
    double c = 0.5;
};

struct SweepConfig {
    std::vector<double> K;
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<OptionStyle> styles{OptionStyle::Call};
    bool greeks = true;
    /// Decimal places in the rendered table.
    int precision = 4;
    /// Contribution columns of width band_width up to band_limit plus the rest;
    /// 0 disables them.
    std::size_t band_limit = 0;
};

struct OutputConfig {
    std::string format = "json";
    std::optional<std::string> path;
};

struct SurfaceConfig {
    std::size_t t_count = 101;
    std::size_t y_count = 101;
};

struct RunConfig {
    ModelConfig model;
    OptionContract contract;
    Numerics numerics;
    OutputConfig output;
    SweepConfig sweep;
    SurfaceConfig surface;
    fd::FDGrid oracle;
    std::size_t band_width = 5;
};

/// Names of the shipped presets.
std::vector<std::string> preset_names();

/// Preset as JSON; throws ConfigInvalid for an unknown name.
Json preset_json(const std::string& name);

/// Parses and validates a full config. Missing keys take the defaults of
/// RunConfig; wrong types or values throw ConfigInvalid naming the field.
RunConfig parse_config(const Json& j);

/// Inverse of parse_config, with every field spelled out.
Json to_json(const RunConfig& config);

DiffusionSpec make_spec(const ModelConfig& model);

/// Barriers, strike and maturity consistency; throws ConfigInvalid.
void validate(const RunConfig& config);

}  // namespace nsbf
