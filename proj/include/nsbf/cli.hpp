#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "nsbf/config.hpp"

namespace nsbf::cli {

/// Command-line overrides applied on top of preset and config file.
struct Overrides {
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<std::size_t> mesh;
    std::optional<double> omega_max;
    std::optional<std::size_t> omega_grid;
    std::optional<std::size_t> nsbf_order;
    std::optional<double> lambda_cutoff;
};

/// preset, then the config file (JSON merge patch), then the flags.
RunConfig load_config(const Overrides& overrides);

/// Each subcommand renders its result in config.output.format.
std::string run_price(const RunConfig& config);
std::string run_greeks(const RunConfig& config);
std::string run_surface(const RunConfig& config);
std::string run_spectrum(const RunConfig& config);
std::string run_contrib(const RunConfig& config);
std::string run_check_coefficients(const RunConfig& config);
std::string run_oracle_compare(const RunConfig& config);
std::string run_table(const RunConfig& config);

/// Dispatches a subcommand by name; throws ConfigInvalid for unknown names.
std::string run_command(const std::string& name, const RunConfig& config);

/// Whole program: parses argv, runs, writes the result to the configured
/// destination (or `out`) and errors to `err`. Returns the exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Fixed-point rendering that never prints a negative zero.
std::string format_fixed(double value, int precision);

}  // namespace nsbf::cli
