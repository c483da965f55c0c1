#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vrrte/characteristics.hpp"
#include "vrrte/fresnel.hpp"
#include "vrrte/medium.hpp"

namespace vrrte {

/// Which part of the transport operator a kernel represents.
///  Direct:    rays cross Y by refraction only (continuity); also the
///             "Fresnel off" model. Evanescent directions carry nothing.
///  Interface: the correction added by the Fresnel conditions.
///  Combined:  Direct + Interface.
enum class KernelPart { Direct, Interface, Combined };

/// Alternative readings of the integral representation, kept for comparison.
struct FormulationOptions {
  /// Include the 1/|omega| path Jacobian on source integrals. Without it the
  /// source kernel is int mu^k psi dmu.
  bool source_path_jacobian = true;
  /// Use n_z / n_0 instead of eta(n_z / n_0) in the continuity term removed
  /// from the bottom-boundary contribution above Y.
  bool literal_alpha_ratio = false;
};

struct KernelSettings {
  Basis basis = Basis::IQ;
  KernelPart part = KernelPart::Combined;
  FormulationOptions formulation{};
  std::size_t mu_nodes = 64;  // per angular panel
};

/// Discrete moment operator at one kappa-bar. For moment k (index k/2) and
/// source power c (index c/2), W[k/2][c/2][r][s] maps component s of the
/// source coefficient of mu^c to component r of the moment. Boundary columns
/// give the moment per unit c_E B(T_E) and c_S B(T_S).
struct MomentKernel {
  double kappa_bar = 0.0;
  std::array<std::array<std::array<std::array<Eigen::MatrixXd, 2>, 2>, 2>, 2> W;
  std::array<Eigen::MatrixX2d, 2> bE;
  std::array<Eigen::MatrixX2d, 2> bS;
};

MomentKernel build_moment_kernel(const ColumnGrid& grid, double kappa_bar, const KernelSettings& settings);

/// Sources on the grid at one frequency: columns [c0 s0, c0 s1, c2 s0, c2 s1],
/// i.e. the mu^0 and mu^2 coefficients of both components.
/// Moments use the same layout: [k0 r0, k0 r1, k2 r0, k2 r1].
Eigen::MatrixX4d apply_kernel(const MomentKernel& K, const Eigen::MatrixX4d& sources, double boundary_E,
                              double boundary_S);

enum class TabulationMode { Auto, Tabulated, Exact };

/// Kernels for all frequencies of a run. Tabulated mode builds levels lazily
/// and interpolates the moments in kappa-bar; exact mode builds one
/// kernel per distinct kappa-bar. Auto picks exact when at most two distinct
/// values occur.
class KernelBank {
 public:
  KernelBank(const ColumnGrid& grid, KernelSettings settings, std::vector<double> levels,
             TabulationMode mode = TabulationMode::Auto, std::string cache_dir = {},
             LevelInterpolation interpolation = LevelInterpolation::Cubic);

  /// Declare the kappa-bar values that will be queried (used by Auto).
  void prepare(const std::vector<double>& kappa_bars);

  Eigen::MatrixX4d moments(double kappa_bar, const Eigen::MatrixX4d& sources, double boundary_E,
                           double boundary_S);

  const KernelSettings& settings() const { return settings_; }
  const std::vector<double>& levels() const { return levels_; }
  const ColumnGrid& grid() const { return grid_; }
  bool tabulated() const { return resolved_ == TabulationMode::Tabulated; }
  std::size_t built_count() const { return built_.size(); }
  std::size_t cache_hits() const { return cache_hits_; }
  /// Level or exact kernel; built on first use.
  const MomentKernel& kernel_at_level(std::size_t level);
  const MomentKernel& kernel_exact(double kappa_bar);

 private:
  const MomentKernel& get(double kappa_bar);
  std::string cache_path(double kappa_bar) const;

  ColumnGrid grid_;
  KernelSettings settings_;
  std::vector<double> levels_;
  TabulationMode mode_;
  TabulationMode resolved_;
  std::string cache_dir_;
  LevelInterpolation interpolation_;
  std::map<double, std::unique_ptr<MomentKernel>> built_;
  std::size_t cache_hits_ = 0;
};

/// Binary cache of one kernel: versioned header then row-major doubles.
void save_kernel(const MomentKernel& K, const std::string& path, std::uint64_t key);
bool load_kernel(MomentKernel& K, const std::string& path, std::uint64_t key, std::size_t n);

/// FNV-1a over the bytes of the grid, the settings and kappa-bar.
std::uint64_t kernel_key(const ColumnGrid& grid, const KernelSettings& settings, double kappa_bar);

// ---------------------------------------------------------------------------
// Pointwise kernels (constant kappa-bar, densities from the medium). Used to
// check the discrete operator and for diagnostics; z, z' must differ from Y.

/// Density in z' of the source kernel without interface effects:
/// 1/2 int mu^k eta^c psi / |omega| dmu for component c of the source.
double psi_kernel(int k, int c, double z, double zp, const OpticalMedium& medium, double kappa_bar,
                  const KernelSettings& settings);

/// The 2x2 interface kernel Z^{k,c}(z, z').
Mat2 kernel_Z(int k, int c, double z, double zp, const OpticalMedium& medium, double kappa_bar,
              const KernelSettings& settings);

struct AlphaFactors {
  Vec2 E;  // per unit c_E B(T_E)
  Vec2 S;  // per unit c_S B(T_S)
};

/// Interface part of the boundary contribution to moment k at z.
AlphaFactors alpha_factors(int k, double z, const OpticalMedium& medium, double kappa_bar,
                           const KernelSettings& settings);

/// alpha^k(z) = alpha_E B(T_E) c_E + alpha_S B(T_S) c_S.
Vec2 alpha_boundary(int k, double z, const OpticalMedium& medium, double kappa_bar, const KernelSettings& settings,
                    double boundary_E, double boundary_S);

/// Integral of rho from 0 to z.
double column_mass_at(const DensityProfile& rho, double z);

}  // namespace vrrte
