#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "vrrte/medium.hpp"

namespace vrrte {

/// A ray through (z, mu). Along a stratified profile the cosine at altitude y
/// is omega(y) = sign(mu) sqrt(1 - (n_z / n_y)^2 (1 - mu^2)).
struct CharacteristicFrame {
  double z = 0.0;
  double mu = 1.0;

  /// |omega| at an altitude of index n_y, seen from a reference of index n_z.
  /// Empty where the ray cannot reach (evanescent).
  std::optional<double> cosine_at(double n_z, double n_y) const;
};

/// exp(-int_{z1}^{z2} kappa(y) / |omega(y)| dy) at frequency nu, by composite
/// 8-point Gauss panels between property breakpoints, halved until the
/// exponent is stable to 1e-8 relative. Zero if any part of the path is
/// evanescent; 1 when z1 == z2.
double phi(double z1, double z2, const CharacteristicFrame& frame, const OpticalMedium& medium, double nu);

/// phi taken between min(z, z') and max(z, z').
double psi(double z, double zp, const CharacteristicFrame& frame, const OpticalMedium& medium, double nu);

/// Angular node seen from one layer: cosine mu in that layer, its weight, and
/// the cosine of the same ray on the far side of the interface.
struct AngularNode {
  double mu;
  double weight;
  std::optional<double> far_mu;
};

/// Quadrature over mu in (0, 1) for an observer in a layer whose index is
/// ratio times the far layer's. For ratio > 1 the range splits at mu_c; above
/// mu_c the nodes are Gauss points in the far-side cosine, which removes the
/// square-root behaviour of eta at mu_c.
std::vector<AngularNode> angular_rule(double ratio, std::size_t nodes_per_panel);

enum class LevelSpacing { Geometric, Uniform };

/// kappa-bar tabulation levels from lo to hi.
std::vector<double> kappa_levels(std::size_t count = 60, double lo = kKappaBarMin, double hi = kKappaBarMax,
                                 LevelSpacing spacing = LevelSpacing::Geometric);

/// Bracketing levels and the linear weight of the upper one.
struct LevelBracket {
  std::size_t lo;
  std::size_t hi;
  double t;
};
LevelBracket bracket(const std::vector<double>& levels, double kappa_bar);

/// Linear in kappa-bar between the bracketing levels, or four-point Lagrange
/// in log kappa-bar (two points at the ends of the range).
enum class LevelInterpolation { Cubic, Linear };

struct LevelStencil {
  std::array<std::size_t, 4> index{};
  std::array<double, 4> weight{};
  std::size_t size = 0;
};

/// A query exactly on a level yields that level alone with weight 1.
LevelStencil level_stencil(const std::vector<double>& levels, double kappa_bar, LevelInterpolation how);

/// Angular moments  int_0^1 mu^k psi(z_i, z_j) eta^j dmu  on grid nodes for
/// k, j in {0, 2}, with eta the cosine at z_j, tabulated at kappa-bar levels.
class TransmissionTable {
 public:
  TransmissionTable(const ColumnGrid& grid, std::vector<double> levels,
                    std::size_t nodes_per_panel = 64,
                    LevelInterpolation interpolation = LevelInterpolation::Cubic);

  /// Interpolation in kappa-bar between levels.
  double value(int k, int j, std::size_t i, std::size_t jn, double kappa_bar) const;
  double at_level(int k, int j, std::size_t i, std::size_t jn, std::size_t level) const;
  const std::vector<double>& levels() const { return levels_; }

 private:
  std::size_t index(std::size_t level, int k, int j, std::size_t i, std::size_t jn) const;
  std::size_t n_;
  std::vector<double> levels_;
  LevelInterpolation interpolation_;
  std::vector<double> data_;
};

}  // namespace vrrte
