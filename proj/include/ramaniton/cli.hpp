#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ramaniton/error.hpp"
#include "ramaniton/model.hpp"
#include "ramaniton/sweep.hpp"

namespace ramaniton::cli {

enum class Format { Csv, Json };

/// `start:stop:step`, or a single number for a one-point grid.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const { return make_grid(start, stop, step); }
};

GridSpec parse_grid(std::string_view text);
/// `lo:hi`
std::pair<double, double> parse_range(std::string_view text);

/// 12 significant digits, "%.12g" style, with negative zero printed as 0.
std::string format_number(double value);

struct RunConfig {
  std::string subcommand;
  ModelParams params;
  std::optional<double> omega_hz;  ///< Omega/2pi
  std::optional<double> n0;
  std::optional<double> n2;
  std::optional<double> intensity;

  std::optional<GridSpec> q_grid;
  std::optional<GridSpec> tau_grid;
  std::optional<double> tau;
  std::optional<double> phi;

  std::pair<double, double> q_range{0.99, 1.01};
  std::pair<double, double> tau_range{5e3, 1.2e4};
  OptimizeOptions optimize;

  int cutoff = 16;
  double max_stokes = 0.75;
  std::size_t oracle_points = 41;

  std::string output;  ///< empty: standard output
  Format format = Format::Csv;

  /// Omega and n0 known: enough to convert tau into a length.
  bool has_length_scale() const { return omega_hz.has_value() && n0.has_value(); }
  /// Whatever physical constants are known, unknown ones left at zero.
  PhysicalConstants constants() const;
};

/// Applies file values on top of `config`; flags are applied afterwards by the caller.
void apply_overrides(RunConfig& config, const ParameterOverrides& overrides);

/// Exit status for a library error: 2 for bad input, 3 for failed verification, 1 otherwise.
int exit_code_for(ErrorKind kind);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;

/// Parses `args` (without the program name), runs the subcommand and writes
/// the result to `out` or the configured file. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ramaniton::cli
