#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vrrte {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double integrate(std::span<const double> values) const;
};

/// n-point Gauss-Legendre rule mapped to (a, b). Nodes are interior to the
/// interval and increasing.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Composite Gauss-Legendre rule with n points on each panel [edges[i], edges[i+1]].
QuadratureRule composite_gauss_legendre(std::span<const double> edges, std::size_t n);

}  // namespace vrrte
