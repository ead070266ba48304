#pragma once

// Run configuration shared by every subcommand: defaults, flat key=value
// config files, and the radial sample grid.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scaledyn::cli {

/// Invalid configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GridKind { linear, log };
enum class OutputFormat { csv, json };

struct RunConfig {
  double gm = 1.0;
  double mass = 1.0;
  double lambda_scale = 1.0;
  /// Unset means "auto" (K = m Lambda).
  std::optional<double> kconst;
  int eta = -1;
  double r_min = 0.2;
  double r_max = 200.0;
  int samples = 256;
  GridKind grid = GridKind::log;
  OutputFormat format = OutputFormat::csv;
  /// Empty or "-" writes to standard output.
  std::string output;
  std::string plot;
  double energy_factor = 1.0;
  std::optional<double> c1;
  double c2 = 0.0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Applies one key=value setting. Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Overlays the settings of a config text ('#' comments, blank lines allowed).
void apply_config_text(RunConfig& config, const std::string& text);

/// Reads and overlays a config file. Throws ConfigError if it cannot be read or parsed.
void apply_config_file(RunConfig& config, const std::string& path);

/// Config text that apply_config_text maps back to the same RunConfig.
std::string serialize(const RunConfig& config);

/// Throws ConfigError when an invariant fails.
void validate(const RunConfig& config);

/// samples radii from r_min to r_max, both included (r_min alone when samples == 1).
std::vector<double> make_grid(const RunConfig& config);

std::string to_string(GridKind kind);
std::string to_string(OutputFormat format);
std::string format_double(double value);

}  // namespace scaledyn::cli
