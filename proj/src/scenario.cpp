#include "vrrte/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <spdlog/spdlog.h>

namespace vrrte {

namespace {

// Shortest representation that round-trips.
std::string num(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long x = to_integer(key, v);
  if (x < 1) throw ConfigError("key '" + key + "': must be positive");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected on/off, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.empty() || v == "none") return out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

std::string list_text(const std::vector<double>& xs) {
  if (xs.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + num(xs[i]);
  return s;
}

const char* rule_name(BandRule r) {
  switch (r) {
    case BandRule::Set: return "set";
    case BandRule::RaiseTo: return "raise";
    case BandRule::Scale: return "scale";
  }
  return "set";
}

// The 15 um CO2 band raised to kappa-bar = 1.
std::vector<AbsorptionBand> default_co2_bands() { return {{14.0, 16.0, BandRule::RaiseTo, 1.0}}; }

std::vector<AbsorptionBand> to_bands(const std::string& key, const std::string& v) {
  if (v.empty() || v == "none") return {};
  if (v == "default") return default_co2_bands();
  std::vector<AbsorptionBand> out;
  for (const auto& item : split(v, ',')) {
    const auto f = split(item, ':');
    if (f.size() != 4) throw ConfigError("key '" + key + "': bands are lo:hi:rule:value, got '" + item + "'");
    AbsorptionBand b;
    b.lambda_lo_um = to_double(key, f[0]);
    b.lambda_hi_um = to_double(key, f[1]);
    if (f[2] == "set") b.rule = BandRule::Set;
    else if (f[2] == "raise") b.rule = BandRule::RaiseTo;
    else if (f[2] == "scale") b.rule = BandRule::Scale;
    else throw ConfigError("key '" + key + "': band rule must be set, raise or scale");
    b.value = to_double(key, f[3]);
    out.push_back(b);
  }
  return out;
}

std::string bands_text(const std::vector<AbsorptionBand>& bands) {
  if (bands.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    s += (i ? "," : "") + num(b.lambda_lo_um) + ":" + num(b.lambda_hi_um) + ":" + rule_name(b.rule) + ":" +
         num(b.value);
  }
  return s;
}

struct KeyDef {
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define VRRTE_DOUBLE(name, member)                                                                   \
  {                                                                                                  \
    name, {                                                                                          \
      [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); }, \
          [](const ScenarioConfig& c) { return num(c.member); }                                      \
    }                                                                                                \
  }
#define VRRTE_COUNT(name, member)                                                                   \
  {                                                                                                 \
    name, {                                                                                         \
      [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = to_count(k, v); }, \
          [](const ScenarioConfig& c) { return std::to_string(c.member); }                          \
    }                                                                                               \
  }
#define VRRTE_BOOL(name, member)                                                                   \
  {                                                                                                \
    name, {                                                                                        \
      [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); }, \
          [](const ScenarioConfig& c) { return std::string(c.member ? "on" : "off"); }             \
    }                                                                                              \
  }

const std::vector<std::pair<std::string, KeyDef>>& key_table() {
  static const std::vector<std::pair<std::string, KeyDef>> table = {
      {"preset",
       {[](ScenarioConfig& c, const std::string&, const std::string& v) { c.preset = v; },
        [](const ScenarioConfig& c) { return c.preset; }}},
      VRRTE_DOUBLE("epsilon", epsilon),
      VRRTE_DOUBLE("beta", beta),
      VRRTE_DOUBLE("Y", Y),
      VRRTE_DOUBLE("Z", Z),
      VRRTE_DOUBLE("a1", albedo.a1),
      VRRTE_DOUBLE("a2", albedo.a2),
      VRRTE_DOUBLE("z1", albedo.z1),
      VRRTE_DOUBLE("z2", albedo.z2),
      VRRTE_DOUBLE("nu1", albedo.nu1),
      VRRTE_DOUBLE("nu2", albedo.nu2),
      VRRTE_DOUBLE("c_E", c_E),
      VRRTE_DOUBLE("T_E", T_E),
      VRRTE_DOUBLE("c_S", c_S),
      VRRTE_DOUBLE("T_S", T_S),
      {"kappa",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v == "none") {
            c.kappa.reset();
            return;
          }
          c.kappa = to_double(k, v);
          c.kappa_table.clear();
        },
        [](const ScenarioConfig& c) { return c.kappa ? num(*c.kappa) : std::string("none"); }}},
      {"kappa_table",
       {[](ScenarioConfig& c, const std::string&, const std::string& v) {
          if (v == "none") {
            c.kappa_table.clear();
            return;
          }
          c.kappa_table = v;
          c.kappa.reset();
        },
        [](const ScenarioConfig& c) { return c.kappa_table.empty() ? std::string("none") : c.kappa_table; }}},
      {"co2_bands",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.co2_bands = to_bands(k, v); },
        [](const ScenarioConfig& c) { return bands_text(c.co2_bands); }}},
      {"rho_breaks",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.rho_breaks = to_list(k, v); },
        [](const ScenarioConfig& c) { return list_text(c.rho_breaks); }}},
      {"rho_values",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.rho_values = to_list(k, v); },
        [](const ScenarioConfig& c) { return list_text(c.rho_values); }}},
      VRRTE_BOOL("fresnel", fresnel),
      {"basis",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v == "iq") c.basis = Basis::IQ;
          else if (v == "lr") c.basis = Basis::LR;
          else throw ConfigError("key '" + k + "': expected iq or lr");
        },
        [](const ScenarioConfig& c) { return std::string(c.basis == Basis::IQ ? "iq" : "lr"); }}},
      VRRTE_COUNT("z_intervals", z_intervals),
      VRRTE_DOUBLE("nu_lo", nu_lo),
      VRRTE_DOUBLE("nu_hi", nu_hi),
      VRRTE_COUNT("nu_panels", nu_panels),
      VRRTE_COUNT("nu_per_panel", nu_per_panel),
      VRRTE_COUNT("mu_nodes", mu_nodes),
      VRRTE_COUNT("kappa_levels", kappa_levels),
      {"kappa_spacing",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v == "geometric") c.kappa_spacing = LevelSpacing::Geometric;
          else if (v == "uniform") c.kappa_spacing = LevelSpacing::Uniform;
          else throw ConfigError("key '" + k + "': expected geometric or uniform");
        },
        [](const ScenarioConfig& c) {
          return std::string(c.kappa_spacing == LevelSpacing::Geometric ? "geometric" : "uniform");
        }}},
      {"kappa_interpolation",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v == "cubic") c.kappa_interpolation = LevelInterpolation::Cubic;
          else if (v == "linear") c.kappa_interpolation = LevelInterpolation::Linear;
          else throw ConfigError("key '" + k + "': expected cubic or linear");
        },
        [](const ScenarioConfig& c) {
          return std::string(c.kappa_interpolation == LevelInterpolation::Cubic ? "cubic" : "linear");
        }}},
      {"kernel_mode",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v == "auto") c.kernel_mode = TabulationMode::Auto;
          else if (v == "tabulated") c.kernel_mode = TabulationMode::Tabulated;
          else if (v == "exact") c.kernel_mode = TabulationMode::Exact;
          else throw ConfigError("key '" + k + "': expected auto, tabulated or exact");
        },
        [](const ScenarioConfig& c) {
          switch (c.kernel_mode) {
            case TabulationMode::Tabulated: return std::string("tabulated");
            case TabulationMode::Exact: return std::string("exact");
            default: return std::string("auto");
          }
        }}},
      {"kernel_cache",
       {[](ScenarioConfig& c, const std::string&, const std::string& v) { c.kernel_cache = v == "none" ? "" : v; },
        [](const ScenarioConfig& c) { return c.kernel_cache.empty() ? std::string("none") : c.kernel_cache; }}},
      {"mode",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v == "up" || v == "increasing") c.mode = RunModes::Up;
          else if (v == "down" || v == "decreasing") c.mode = RunModes::Down;
          else if (v == "both") c.mode = RunModes::Both;
          else throw ConfigError("key '" + k + "': expected up, down or both");
        },
        [](const ScenarioConfig& c) {
          return std::string(c.mode == RunModes::Up ? "up" : c.mode == RunModes::Down ? "down" : "both");
        }}},
      VRRTE_DOUBLE("tol", tolerance),
      {"max_iterations",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.max_iterations = static_cast<int>(to_count(k, v));
        },
        [](const ScenarioConfig& c) { return std::to_string(c.max_iterations); }}},
      VRRTE_DOUBLE("hot_start_celsius", hot_start_celsius),
      VRRTE_DOUBLE("probe_altitude_m", probe_altitude_m),
      VRRTE_BOOL("source_path_jacobian", source_path_jacobian),
      VRRTE_BOOL("literal_alpha_ratio", literal_alpha_ratio),
      VRRTE_BOOL("literal_q_source", literal_q_source),
  };
  return table;
}

#undef VRRTE_DOUBLE
#undef VRRTE_COUNT
#undef VRRTE_BOOL

const KeyDef& find_key(const std::string& key) {
  for (const auto& [name, def] : key_table())
    if (name == key) return def;
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& entry : key_table()) k.push_back(entry.first);
    return k;
  }();
  return keys;
}

void apply_entry(ScenarioConfig& config, const std::string& key, const std::string& value) {
  find_key(key).set(config, key, value);
}

ScenarioConfig preset_config(const std::string& name) {
  ScenarioConfig c;
  c.preset = name;
  if (name == "custom") return c;
  if (name == "case1") {
    c.epsilon = -0.3;
    c.c_S = 2.0e-5;
    c.T_S = 5700.0;
    c.kappa = 0.5;
  } else if (name == "case2") {
    c.epsilon = -0.01;
    c.c_E = 2.5;
    c.T_E = 300.0;
    c.kappa = 0.5;
  } else if (name == "water_air") {
    c.epsilon = -0.3;
    c.Y = 0.1;
    c.c_E = 2.5;
    c.T_E = 300.0;
    c.kappa.reset();
    c.kappa_table = "gemini_like";
    c.rho_breaks = {0.1};
    c.rho_values = {10.0, 0.1};
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected case1, case2, water_air or custom)");
  }
  return c;
}

std::pair<std::string, std::string> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + text + "'");
  auto key = trim(text.substr(0, eq));
  auto value = trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigError("empty key in '" + text + "'");
  return {key, value};
}

ConfigEntries read_config_text(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse_assignment(line));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_config_text(ss.str());
}

ScenarioConfig parse_config(const ConfigEntries& entries, const std::optional<std::string>& preset_override) {
  std::string preset = "custom";
  bool has_kappa = false, has_table = false;
  for (const auto& [k, v] : entries) {
    if (k == "preset") preset = v;
    has_kappa |= k == "kappa" && v != "none";
    has_table |= k == "kappa_table" && v != "none";
  }
  if (has_kappa && has_table) throw ConfigError("give either kappa or kappa_table, not both");
  if (preset_override) preset = *preset_override;

  ScenarioConfig c = preset_config(preset);
  for (const auto& [k, v] : entries)
    if (k != "preset") apply_entry(c, k, v);
  c.validate();
  return c;
}

std::string resolve_table_path(const std::string& name) {
  if (name == "gemini_like") return std::string(VRRTE_DATA_DIR) + "/gemini_like_kappa.txt";
  return name;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(beta >= 0.0 && beta <= 1.0)) fail("beta must lie in [0, 1]");
  if (!(Z > 0.0)) fail("Z must be positive");
  if (!(Y > 0.0 && Y < Z)) fail("need 0 < Y < Z");
  if (!(1.0 + epsilon > 0.0)) fail("need 1 + epsilon > 0");
  if (!(albedo.a1 >= 0.0 && albedo.a1 < 1.0) || !(albedo.a2 >= 0.0 && albedo.a2 < 1.0))
    fail("a1 and a2 must lie in [0, 1)");
  if (!(albedo.z1 <= albedo.z2)) fail("need z1 <= z2");
  if (!(albedo.nu1 < albedo.nu2 && albedo.nu2 > 0.0)) fail("need nu1 < nu2");
  if (!(c_E >= 0.0 && c_S >= 0.0)) fail("c_E and c_S must be non-negative");
  if (!(T_E >= 0.0 && T_S >= 0.0)) fail("T_E and T_S must be non-negative (kelvin)");
  if (kappa.has_value() == !kappa_table.empty()) fail("exactly one of kappa and kappa_table must be set");
  if (kappa && !(*kappa > 0.0)) fail("kappa must be positive");
  if (!kappa_table.empty() && !std::filesystem::exists(resolve_table_path(kappa_table)))
    fail("kappa table not found: " + resolve_table_path(kappa_table));
  if (rho_values.size() != rho_breaks.size() + 1) fail("rho_values needs one more entry than rho_breaks");
  for (double r : rho_values)
    if (!(r > 0.0)) fail("densities must be positive");
  for (std::size_t i = 0; i < rho_breaks.size(); ++i)
    if (!(rho_breaks[i] > 0.0 && rho_breaks[i] < Z) || (i > 0 && !(rho_breaks[i] > rho_breaks[i - 1])))
      fail("rho_breaks must increase inside (0, Z)");
  if (z_intervals < 2) fail("z_intervals must be at least 2");
  if (!(nu_lo > 0.0 && nu_hi > nu_lo)) fail("need 0 < nu_lo < nu_hi");
  if (kappa_levels < 2) fail("kappa_levels must be at least 2");
  if (!(tolerance > 0.0)) fail("tol must be positive");
  if (!(hot_start_celsius > -kCelsiusOffset)) fail("hot start below absolute zero");
  if (!(probe_altitude_m >= 0.0 && probe_altitude_m <= Z * 1e4)) fail("probe altitude outside the column");
}

std::string describe(const ScenarioConfig& config) {
  std::string out;
  for (const auto& [name, def] : key_table()) out += name + " = " + def.get(config) + "\n";
  return out;
}

OpticalMedium make_medium(const ScenarioConfig& c) {
  AbsorptionTable table =
      c.kappa ? AbsorptionTable::constant(*c.kappa) : AbsorptionTable::from_file(resolve_table_path(c.kappa_table));
  if (!c.co2_bands.empty()) table = apply_co2_modifier(table, c.co2_bands);
  return OpticalMedium(RefractiveProfile::step(c.epsilon, c.Y, c.Z), std::move(table),
                       DensityProfile{c.rho_breaks, c.rho_values}, c.albedo, c.beta);
}

BoundaryData make_boundary(const ScenarioConfig& c) {
  return BoundaryData{c.c_E, RescaledTemperature::from_kelvin(c.T_E).value(), c.c_S,
                      RescaledTemperature::from_kelvin(c.T_S).value()};
}

KernelSettings make_kernel_settings(const ScenarioConfig& c) {
  KernelSettings s;
  s.basis = c.basis;
  s.part = c.fresnel ? KernelPart::Combined : KernelPart::Direct;
  s.formulation.source_path_jacobian = c.source_path_jacobian;
  s.formulation.literal_alpha_ratio = c.literal_alpha_ratio;
  s.mu_nodes = c.mu_nodes;
  return s;
}

SolverOptions make_solver_options(const ScenarioConfig& c) {
  SolverOptions o;
  o.tolerance = c.tolerance;
  o.max_iterations = c.max_iterations;
  o.hot_start = RescaledTemperature::from_celsius(c.hot_start_celsius).value();
  o.probe_z = c.probe_altitude_m / 1e4;
  o.literal_q_source = c.literal_q_source;
  return o;
}

bool ScenarioResult::converged() const {
  return !runs.empty() && std::all_of(runs.begin(), runs.end(), [](const IterationResult& r) { return r.converged; });
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  OpticalMedium medium = make_medium(config);
  ColumnGrid grid = ColumnGrid::build(medium, config.z_intervals, true);
  FrequencyGrid freq = FrequencyGrid::log_panels(config.nu_lo, config.nu_hi, config.nu_panels, config.nu_per_panel);
  ScenarioResult result{config, ColumnModel(std::move(medium), grid, std::move(freq)), {}, 0.0};

  KernelBank bank(grid, make_kernel_settings(config),
                  kappa_levels(config.kappa_levels, kKappaBarMin, kKappaBarMax, config.kappa_spacing),
                  config.kernel_mode, config.kernel_cache, config.kappa_interpolation);
  const BoundaryData boundary = make_boundary(config);
  const SolverOptions options = make_solver_options(config);
  if (config.mode != RunModes::Down)
    result.runs.push_back(iterate_to_convergence(result.model, bank, boundary, IterationMode::Increasing, options));
  if (config.mode != RunModes::Up)
    result.runs.push_back(iterate_to_convergence(result.model, bank, boundary, IterationMode::Decreasing, options));
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  spdlog::debug("{} kernels built ({} from cache), {:.2f} s", bank.built_count(), bank.cache_hits(), result.seconds);
  return result;
}

namespace {

const char* mode_tag(IterationMode m) { return m == IterationMode::Increasing ? "up" : "down"; }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void write_spectrum(const ScenarioResult& r, const std::filesystem::path& p, std::size_t node) {
  auto out = open_out(p);
  out << "wavelength_um,nu,J0_1e5,K0_1e7\n";
  if (r.runs.empty()) return;
  const auto& M = r.runs.front().moments;
  const auto nodes = r.model.frequencies().nodes();
  const auto i = static_cast<Eigen::Index>(node);
  // ascending wavelength
  for (std::size_t q = nodes.size(); q-- > 0;) {
    const auto j = static_cast<Eigen::Index>(q);
    out << num(wavelength_um(nodes[q])) << ',' << num(nodes[q]) << ',' << num(1e5 * M.J0(i, j)) << ','
        << num(1e7 * M.K0(i, j)) << '\n';
  }
}

}  // namespace

void write_outputs(const ScenarioResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());

  const auto& grid = r.model.grid();
  {
    auto out = open_out(base / "temperature.csv");
    out << "z,altitude_m,layer";
    for (const auto& run : r.runs) {
      const std::string m = mode_tag(run.mode);
      out << ",T_" << m << "_celsius,T_" << m << "_kelvin,T_" << m << "_rescaled";
    }
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << num(grid.z(i)) << ',' << num(grid.z(i) * 1e4) << ',' << grid.layer_of(i);
      for (const auto& run : r.runs) {
        const RescaledTemperature T(run.T(static_cast<Eigen::Index>(i)));
        out << ',' << num(T.celsius()) << ',' << num(T.kelvin()) << ',' << num(T.value());
      }
      out << '\n';
    }
  }
  write_spectrum(r, base / "imean_bottom.csv", 0);
  write_spectrum(r, base / "imean_top.csv", grid.size() - 1);
  {
    auto out = open_out(base / "convergence.csv");
    out << "iteration";
    for (const auto& run : r.runs) out << ",probe_T_" << mode_tag(run.mode) << "_celsius";
    out << '\n';
    std::size_t rows = 0;
    for (const auto& run : r.runs) rows = std::max(rows, run.T_history.size());
    for (std::size_t n = 0; n < rows; ++n) {
      out << n;
      for (const auto& run : r.runs) {
        out << ',';
        if (n < run.T_history.size())
          out << num(RescaledTemperature(run.T_history[n](static_cast<Eigen::Index>(run.probe_node))).celsius());
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(base / "diagnostics.csv");
    out << "mode,iteration,max_dT,probe_T_rescaled,probe_T_celsius,monotone,moments_bounded\n";
    for (const auto& run : r.runs)
      for (const auto& rec : run.records)
        out << mode_tag(run.mode) << ',' << rec.iteration << ',' << num(rec.max_dT) << ',' << num(rec.probe_T) << ','
            << num(RescaledTemperature(rec.probe_T).celsius()) << ',' << (rec.monotone ? 1 : 0) << ','
            << (rec.moments_bounded ? 1 : 0) << '\n';
  }
  {
    auto out = open_out(base / "manifest.txt");
    out << "# resolved configuration\n" << describe(r.config) << "# results\n";
    out << "# nodes = " << grid.size() << ", frequencies = " << r.model.bands() << "\n";
    for (const auto& run : r.runs)
      out << "# " << mode_tag(run.mode) << ": converged = " << (run.converged ? "yes" : "no")
          << ", iterations = " << run.iterations << ", residual = " << num(run.residual)
          << ", probe altitude = " << num(grid.z(run.probe_node) * 1e4) << " m\n";
  }
  const fs::path marker = base / "NOT_CONVERGED";
  if (!r.converged()) {
    auto out = open_out(marker);
    for (const auto& run : r.runs)
      if (!run.converged) out << mode_tag(run.mode) << '\n';
    if (r.runs.empty()) out << "no runs\n";
  } else {
    fs::remove(marker, ec);
  }
}

}  // namespace vrrte
