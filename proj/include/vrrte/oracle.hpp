#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "vrrte/solver.hpp"

namespace vrrte {

/// Discrete ordinates on (0, 1), used symmetrically for mu and -mu. Support
/// directions carry zero weight and only serve the interface interpolation.
struct OrdinateSet {
  std::vector<double> mu;      // increasing, includes the support directions
  std::vector<double> weight;  // 0 on support directions

  /// Gauss-Legendre on (0, 1), or on (0, split) and (split, 1) when split > 0,
  /// with support directions at ~0, split and 1.
  static OrdinateSet gauss(std::size_t per_panel, double split = 0.0);
  /// Sum of the weights over both hemispheres.
  double total_weight() const;
  /// Linear interpolation of per-ordinate values at cosine m.
  template <class V>
  V interpolate(const std::vector<V>& values, double m) const {
    if (m <= mu.front()) return values.front();
    if (m >= mu.back()) return values.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(mu.begin(), mu.end(), m) - mu.begin());
    const std::size_t lo = hi - 1;
    const double t = (m - mu[lo]) / (mu[hi] - mu[lo]);
    return values[lo] * (1.0 - t) + values[hi] * t;
  }
};

struct OracleOptions {
  std::size_t refine = 8;      // sub-cells per solver cell
  std::size_t ordinates = 96;  // per angular panel
  bool fresnel = true;         // false: continuity across Y
};

/// Brute-force transport of frozen sources. Each ordinate is swept upwind
/// with step characteristics on a refined grid; at Y the Fresnel conditions
/// couple the two layers, the refracted direction being interpolated between
/// the other layer's ordinates. Returns moments on the solver nodes.
MomentField sweep_reference(const ColumnModel& model, const SourceField& sources, const BoundaryData& boundary,
                            const OracleOptions& options = {});

/// Intensity I(z, mu) for pure absorption with constant kappa and index:
/// mu c_E B(T_E) e^{-kappa z / mu} upward, |mu| c_S B(T_S) e^{-kappa (Z - z) / |mu|} downward.
double analytic_absorption(double z, double mu, double kappa, double Z, const BoundaryData& boundary, double nu);

}  // namespace vrrte
