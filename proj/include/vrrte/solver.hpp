#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "vrrte/kernels.hpp"
#include "vrrte/medium.hpp"
#include "vrrte/spectral.hpp"

namespace vrrte {

/// Boundary inflow I(0, mu) = mu c_E B(T_E), I(Z, -mu) = mu c_S B(T_S);
/// temperatures rescaled.
struct BoundaryData {
  double c_E = 0.0;
  double T_E = 0.0;
  double c_S = 0.0;
  double T_S = 0.0;

  double bottom(double nu) const { return c_E == 0.0 ? 0.0 : c_E * planck(nu, T_E); }
  double top(double nu) const { return c_S == 0.0 ? 0.0 : c_S * planck(nu, T_S); }
};

/// Medium sampled on the column and frequency grids. Arrays are nodes x frequencies.
class ColumnModel {
 public:
  ColumnModel(OpticalMedium medium, ColumnGrid grid, FrequencyGrid frequencies);

  const OpticalMedium& medium() const { return medium_; }
  const ColumnGrid& grid() const { return grid_; }
  const FrequencyGrid& frequencies() const { return freq_; }
  std::size_t nodes() const { return grid_.size(); }
  std::size_t bands() const { return freq_.size(); }
  double kappa_bar(std::size_t q) const { return kappa_bar_[q]; }
  const std::vector<double>& kappa_bars() const { return kappa_bar_; }
  const Eigen::MatrixXd& kappa_a() const { return kappa_a_; }
  const Eigen::MatrixXd& kappa_s() const { return kappa_s_; }
  /// planck(nu_q, T_i) for a temperature profile.
  Eigen::MatrixXd planck_field(const Eigen::VectorXd& T) const;

 private:
  OpticalMedium medium_;
  ColumnGrid grid_;
  FrequencyGrid freq_;
  std::vector<double> kappa_bar_;
  Eigen::MatrixXd kappa_a_;
  Eigen::MatrixXd kappa_s_;
};

/// J_k = 1/2 int mu^k I dmu and K_k = 1/2 int mu^k Q dmu, nodes x frequencies.
struct MomentField {
  Eigen::MatrixXd J0, J2, K0, K2;

  static MomentField zeros(std::size_t nodes, std::size_t bands);
  /// Unpolarized isotropic radiation J0 = B(T), J2 = J0 / 3.
  static MomentField isotropic(const ColumnModel& model, const Eigen::VectorXd& T);
};

/// Rescaled temperature per node.
using TemperatureField = Eigen::VectorXd;

/// Source coefficients S = [s0 + mu^2 s2, s0p + mu^2 s2p]. In the IQ basis
/// the components are (I, Q); in the LR basis (I_l, I_r).
struct SourceField {
  Basis basis = Basis::IQ;
  Eigen::MatrixXd s0, s2, s0p, s2p;

  /// H = (9 beta kappa_s / 8)(J2 - J0/3 - K0 + K2); stored for diagnostics.
  Eigen::MatrixXd H;
};

/// literal_q_source uses Q-source coefficients (H/3, -H) in place of (-H, H).
SourceField build_sources(const MomentField& moments, const TemperatureField& T, const ColumnModel& model,
                          Basis basis, bool literal_q_source = false);

/// Moments from frozen sources: kernel sum over nodes plus boundary terms, per frequency.
MomentField moment_update(const SourceField& sources, KernelBank& kernels, const ColumnModel& model,
                          const BoundaryData& boundary);

/// Node-wise solution of int kappa_a B(T) dnu = int kappa_a J0 dnu.
TemperatureField temperature_update(const MomentField& moments, const ColumnModel& model,
                                    const InversionOptions& options = {});

/// max over nodes of |int kappa_a (B(T) - J0) dnu| / int kappa_a B(T) dnu.
double equilibrium_residual(const MomentField& moments, const TemperatureField& T, const ColumnModel& model);

enum class IterationMode { Increasing, Decreasing };

struct SolverOptions {
  double tolerance = 1e-4;  // sup-norm on rescaled T
  int max_iterations = 50;
  double hot_start = RescaledTemperature::from_celsius(180.0).value();
  double probe_z = 0.03;  // 300 m in units of 10 km
  bool literal_q_source = false;
  double monotone_slack = 1e-12;
  InversionOptions inversion{};
};

struct IterationRecord {
  int iteration = 0;
  double max_dT = 0.0;
  double probe_T = 0.0;
  bool monotone = true;        // T and J0 moved in the mode's direction at every node
  bool moments_bounded = true; // J0 >= 0, J2 <= J0, |K0| <= J0
};

struct IterationResult {
  IterationMode mode = IterationMode::Increasing;
  bool converged = false;
  int iterations = 0;
  std::size_t probe_node = 0;
  TemperatureField T;
  MomentField moments;
  std::vector<IterationRecord> records;
  std::vector<TemperatureField> T_history;  // T^0, T^1, ...
  double residual = 0.0;                    // equilibrium residual after a fresh sweep

  bool monotone() const;
  bool moments_bounded() const;
};

/// sources -> moments -> temperature until the sup-norm change in T drops
/// below the tolerance. Increasing mode starts from T = 0 and zero moments;
/// decreasing mode from the hot start with isotropic moments at that temperature.
IterationResult iterate_to_convergence(const ColumnModel& model, KernelBank& kernels, const BoundaryData& boundary,
                                       IterationMode mode, const SolverOptions& options = {});

}  // namespace vrrte
