#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vrrte/characteristics.hpp"
#include "vrrte/fresnel.hpp"
#include "vrrte/kernels.hpp"
#include "vrrte/medium.hpp"
#include "vrrte/solver.hpp"

namespace vrrte {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunModes { Up, Down, Both };

/// Everything a run needs. Temperatures T_E, T_S in kelvin; altitudes in
/// units of 10 km except probe_altitude_m.
struct ScenarioConfig {
  std::string preset = "custom";

  double epsilon = 0.0;
  double beta = 1.0;
  double Y = 0.5;
  double Z = 1.0;
  AlbedoParams albedo{};
  double c_E = 0.0;
  double T_E = 0.0;
  double c_S = 0.0;
  double T_S = 0.0;

  std::optional<double> kappa = 0.5;
  std::string kappa_table;  // path, or "gemini_like" for the bundled table
  std::vector<AbsorptionBand> co2_bands;
  std::vector<double> rho_breaks;
  std::vector<double> rho_values{1.0};

  bool fresnel = true;
  Basis basis = Basis::IQ;

  std::size_t z_intervals = 100;
  double nu_lo = 0.01;
  double nu_hi = 20.0;
  std::size_t nu_panels = 40;
  std::size_t nu_per_panel = 3;
  std::size_t mu_nodes = 64;
  std::size_t kappa_levels = 60;
  LevelSpacing kappa_spacing = LevelSpacing::Geometric;
  LevelInterpolation kappa_interpolation = LevelInterpolation::Cubic;
  TabulationMode kernel_mode = TabulationMode::Auto;
  std::string kernel_cache;

  RunModes mode = RunModes::Both;
  double tolerance = 1e-4;
  int max_iterations = 50;
  double hot_start_celsius = 180.0;
  double probe_altitude_m = 300.0;

  bool source_path_jacobian = true;
  bool literal_alpha_ratio = false;
  bool literal_q_source = false;

  void validate() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Every recognised key, in manifest order.
const std::vector<std::string>& config_keys();

/// Preset values on top of the defaults. Throws ConfigError for unknown names.
ScenarioConfig preset_config(const std::string& name);

/// "key = value" lines; '#' starts a comment. Throws ConfigError on syntax errors.
ConfigEntries read_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);
std::pair<std::string, std::string> parse_assignment(const std::string& text);

/// Sets one key. Throws ConfigError for unknown keys or malformed values.
void apply_entry(ScenarioConfig& config, const std::string& key, const std::string& value);

/// Preset (from preset_override, else a "preset" entry, else custom), then the
/// entries in order, then validation. Giving both kappa and kappa_table is an error.
ScenarioConfig parse_config(const ConfigEntries& entries, const std::optional<std::string>& preset_override = {});

/// The resolved configuration as "key = value" lines, parseable by read_config_text.
std::string describe(const ScenarioConfig& config);

/// Built pieces of a scenario.
OpticalMedium make_medium(const ScenarioConfig& config);
BoundaryData make_boundary(const ScenarioConfig& config);
KernelSettings make_kernel_settings(const ScenarioConfig& config);
SolverOptions make_solver_options(const ScenarioConfig& config);
std::string resolve_table_path(const std::string& name);

struct ScenarioResult {
  ScenarioConfig config;
  ColumnModel model;
  std::vector<IterationResult> runs;  // increasing first when both are run
  double seconds = 0.0;

  bool converged() const;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// temperature.csv, imean_bottom.csv, imean_top.csv, convergence.csv,
/// diagnostics.csv and manifest.txt; NOT_CONVERGED when any run failed.
void write_outputs(const ScenarioResult& result, const std::string& dir);

}  // namespace vrrte
