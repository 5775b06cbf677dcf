#pragma once

#include "phs/discretization.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/// Configuration parsing, command execution, and result serialization for
/// the `phs` command-line tool.
///
/// Config documents are JSON; complex scalars are written as plain numbers
/// or [re, im] pairs.  Result records are JSON objects with sorted keys and
/// CSV files use RFC 4180 quoting with 17-significant-digit doubles, so a
/// given config, flag set, and seed always reproduces byte-identical
/// output.
namespace phs {

/// Parse or semantic-validation failure, with position information (byte
/// offset for syntax errors, config path like "$.P0[1]" otherwise).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initial state profile for simulations; one excited component, the rest
/// zero.
struct InitialCondition {
  enum class Kind { gaussian, sine, constant };
  Kind kind = Kind::gaussian;
  double center = 0.5;     ///< gaussian: bump center
  double width = 0.1;      ///< gaussian: standard deviation
  double amplitude = 1.0;  ///< all kinds
  int mode = 1;            ///< sine: half-wave count on the interval
  Index component = 0;     ///< which state component carries the profile

  [[nodiscard]] GridFunction sample(Index d, const SpatialGrid& g) const;
};

/// Discretization and time-stepping parameters from the config document.
struct SimulationParams {
  Index n = 200;
  double dt = 1e-3;
  double t_final = 1.0;
  InitialCondition initial;
};

/// A parsed config document: the system plus optional simulation block.
struct SystemConfig {
  PHSystem system;
  std::optional<SimulationParams> simulation;
};

/// Command-line knobs that may override config values.
struct CliOptions {
  std::optional<Index> n;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<std::string> out;
  std::uint64_t seed = 0;
  Tolerances tol;
  bool include_state = false;  ///< add flattened state columns to CSV output
};

using ResultRecord = nlohmann::json;

/// Parses and semantically validates a config document.  Throws ConfigError
/// with position information on failure.
[[nodiscard]] SystemConfig parse_config(const std::string& text,
                                        const Tolerances& tol = {});

/// Executes one of the commands `check`, `simulate`, `spectrum`,
/// `deficiency`, `green` and returns its result record.  Commands that
/// produce tabular data (`simulate`, `spectrum`) also write a CSV file to
/// `opt.out` (or a command-specific default path).  Throws ConfigError for
/// configuration-level problems and std::exception subclasses for runtime
/// failures.
[[nodiscard]] ResultRecord run_command(const std::string& command,
                                       const SystemConfig& config,
                                       const CliOptions& opt);

/// Writes an RFC 4180 CSV file: header row plus one row per entry of
/// `rows`, doubles at 17 significant digits, LF line endings.  Throws
/// std::invalid_argument if any row length differs from the header length
/// and std::runtime_error if the file cannot be written.
void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::string& path);

}  // namespace phs
