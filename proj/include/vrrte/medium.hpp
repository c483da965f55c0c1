#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace vrrte {

/// Lower and upper bounds of the kappa-bar tabulation range.
inline constexpr double kKappaBarMin = 0.01;
inline constexpr double kKappaBarMax = 1.2;

/// Wavelength in micrometres of a rescaled frequency, and back
/// (wavelength_um = 3 / nu with nu in units of 1e14 Hz).
inline double wavelength_um(double nu) { return 3.0 / nu; }
inline double frequency_from_wavelength(double lambda_um) { return 3.0 / lambda_um; }

/// Which side of the interface a point at exactly z = Y belongs to.
enum class Side { Lower, Upper };

/// Two-layer refractive index: n_lower on (0, Y), n_upper on (Y, Z).
struct RefractiveProfile {
  double Y = 0.5;
  double Z = 1.0;
  double n_lower = 1.0;
  double n_upper = 1.0;

  /// The profile used throughout the numerical cases: n = 1 + eps 1_{z > Y}.
  static RefractiveProfile step(double epsilon, double Y = 0.5, double Z = 1.0);

  void validate() const;
  double n_at(double z, Side side_at_interface = Side::Lower) const;
  /// n_lower / n_upper; the ratio for light leaving the lower layer.
  double ratio_lower_upper() const { return n_lower / n_upper; }
  /// n_upper / n_lower; the ratio for light leaving the upper layer.
  double ratio_upper_lower() const { return n_upper / n_lower; }
  bool continuous() const { return n_lower == n_upper; }
};

enum class BandRule { Set, RaiseTo, Scale };

/// Modification of kappa-bar inside a wavelength interval [lambda_lo, lambda_hi] (micrometres).
struct AbsorptionBand {
  double lambda_lo_um = 0.0;
  double lambda_hi_um = 0.0;
  BandRule rule = BandRule::Set;
  double value = 1.0;
};

/// kappa-bar as a function of rescaled frequency: piecewise linear in nu,
/// clamped at the ends, with optional band modifiers applied on top.
class AbsorptionTable {
 public:
  static AbsorptionTable constant(double kappa_bar);
  /// Two columns (wavelength in micrometres, kappa-bar), whitespace or comma
  /// separated; lines starting with '#' are ignored.
  static AbsorptionTable from_text(std::istream& in);
  static AbsorptionTable from_file(const std::string& path);

  double operator()(double nu) const;
  /// The table without any band modifiers.
  double base(double nu) const;

  /// Returns a copy with bands added. Throws on overlapping bands or bands
  /// outside the tabulated wavelength range.
  AbsorptionTable with_bands(const std::vector<AbsorptionBand>& bands) const;

  bool in_band(double nu) const;
  const std::vector<AbsorptionBand>& bands() const { return bands_; }
  const std::vector<double>& nu_nodes() const { return nu_; }
  const std::vector<double>& values() const { return kappa_; }
  bool is_constant() const { return nu_.size() == 1; }

 private:
  std::vector<double> nu_;     // increasing
  std::vector<double> kappa_;
  std::vector<AbsorptionBand> bands_;
};

/// Convenience wrapper matching the wording used in the CLI and tests.
AbsorptionTable apply_co2_modifier(const AbsorptionTable& table, const std::vector<AbsorptionBand>& bands);

/// Piecewise-constant density multiplier rho(z): values[i] on [breaks[i-1], breaks[i]).
struct DensityProfile {
  std::vector<double> breaks;
  std::vector<double> values{1.0};

  static DensityProfile uniform(double rho = 1.0) { return DensityProfile{{}, {rho}}; }
  void validate() const;
  double at(double z) const;
};

/// a_s = a1 1_{z in (z1,z2)} + a2 1_{z > z2} 1_{nu in (nu1,nu2)} (nu/nu2)^4
struct AlbedoParams {
  double a1 = 0.7;
  double a2 = 0.3;
  double z1 = 0.4;
  double z2 = 0.8;
  double nu1 = 0.6;
  double nu2 = 1.5;

  static AlbedoParams none() { return AlbedoParams{0.0, 0.0, 0.4, 0.8, 0.6, 1.5}; }
  void validate() const;
  double at(double z, double nu) const;
};

struct LocalProperties {
  double n;
  double kappa;
  double kappa_s;
  double kappa_a;
  double beta;
};

/// All z- and nu-dependent material properties. Immutable after construction.
class OpticalMedium {
 public:
  OpticalMedium(RefractiveProfile profile, AbsorptionTable table, DensityProfile density, AlbedoParams albedo,
                double beta);

  const RefractiveProfile& profile() const { return profile_; }
  const AbsorptionTable& table() const { return table_; }
  const DensityProfile& density() const { return density_; }
  const AlbedoParams& albedo_params() const { return albedo_; }
  double beta() const { return beta_; }

  /// kappa-bar clamped below at kKappaBarMin.
  double kappa_bar(double nu) const;
  double albedo(double z, double nu) const { return albedo_.at(z, nu); }
  LocalProperties properties(double z, double nu, Side side_at_interface = Side::Lower) const;

  /// Sorted interior points where some property is discontinuous in z.
  std::vector<double> breakpoints() const;

 private:
  RefractiveProfile profile_;
  AbsorptionTable table_;
  DensityProfile density_;
  AlbedoParams albedo_;
  double beta_;
};

/// A discretised layer of constant refractive index.
struct Layer {
  std::size_t first = 0;  // first node index
  std::size_t last = 0;   // last node index (inclusive)
  double z_lo = 0.0;
  double z_hi = 0.0;
  double n = 1.0;
};

/// Altitude nodes for the column. [0, Z] is cut into segments at every
/// property breakpoint; each segment owns its end nodes, so a breakpoint
/// appears twice (its lower and upper limit) and properties are constant on
/// every segment. With an interface the segments below Y form layer 0 and
/// those above form layer 1; without one there is a single layer.
class ColumnGrid {
 public:
  static ColumnGrid build(const OpticalMedium& medium, std::size_t intervals, bool with_interface = true);

  std::size_t size() const { return z_.size(); }
  const std::vector<double>& z() const { return z_; }
  double z(std::size_t i) const { return z_[i]; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t layer_of(std::size_t node) const { return node_layer_[node]; }
  bool has_interface() const { return layers_.size() == 2; }
  /// Altitude at which the node's material properties are evaluated (the
  /// midpoint of its segment).
  double property_z(std::size_t node) const { return property_z_[node]; }
  /// Density on the cell joining node c to node c + 1; zero across segments.
  double cell_rho(std::size_t c) const { return cell_rho_[c]; }
  double cell_length(std::size_t c) const { return z_[c + 1] - z_[c]; }
  /// Integral of rho from 0 to node i; the optical depth between two nodes
  /// is kappa_bar times the difference.
  double column_mass(std::size_t i) const { return mass_[i]; }
  /// Node nearest to z; on a breakpoint the side picks the lower or upper copy.
  std::size_t nearest(double z, Side side = Side::Lower) const;
  Side side_of(std::size_t node) const { return node_layer_[node] == 0 ? Side::Lower : Side::Upper; }

 private:
  std::vector<double> z_;
  std::vector<std::size_t> node_layer_;
  std::vector<double> property_z_;
  std::vector<Layer> layers_;
  std::vector<double> cell_rho_;
  std::vector<double> mass_;
};

}  // namespace vrrte
