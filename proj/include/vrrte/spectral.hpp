#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vrrte {

/// Kelvin per unit of rescaled temperature (T = T_K / 4798, with
/// frequencies measured in units of 1e14 Hz).
inline constexpr double kTemperatureScale = 4798.0;
inline constexpr double kCelsiusOffset = 273.15;

/// Dimensionless temperature T = T_K / 4798.
class RescaledTemperature {
 public:
  constexpr RescaledTemperature() = default;
  explicit RescaledTemperature(double value);

  static RescaledTemperature from_kelvin(double kelvin) { return RescaledTemperature(kelvin / kTemperatureScale); }
  static RescaledTemperature from_celsius(double celsius) { return from_kelvin(celsius + kCelsiusOffset); }

  constexpr double value() const { return value_; }
  constexpr double kelvin() const { return value_ * kTemperatureScale; }
  constexpr double celsius() const { return kelvin() - kCelsiusOffset; }

 private:
  double value_ = 0.0;
};

/// Quadrature for integrals over a truncated frequency range.
class FrequencyGrid {
 public:
  FrequencyGrid(std::vector<double> nodes, std::vector<double> weights, double lo, double hi);

  /// Composite Gauss-Legendre panels on a geometric partition of (lo, hi).
  static FrequencyGrid log_panels(double lo = 0.01, double hi = 20.0, std::size_t panels = 40,
                                  std::size_t nodes_per_panel = 3);

  /// A single node of unit weight, for monochromatic runs.
  static FrequencyGrid single(double nu);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double lo_;
  double hi_;
};

/// Rescaled Planck function nu^3 / (exp(nu/T) - 1). Returns 0 for T = 0 and
/// once nu/T exceeds 700.
double planck(double nu, double temperature);

/// d planck / dT.
double planck_dT(double nu, double temperature);

double spectral_integral(std::span<const double> values, const FrequencyGrid& grid);

struct InversionOptions {
  double rtol = 1e-10;
  int max_iterations = 200;
};

class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves  sum_nu w kappa_a(nu) B_nu(T) = target  for T >= 0.
/// The left side is strictly increasing in T, so the root is unique.
RescaledTemperature invert_planck_mean(double target, std::span<const double> kappa_a,
                                       const FrequencyGrid& grid, const InversionOptions& options = {});

}  // namespace vrrte
