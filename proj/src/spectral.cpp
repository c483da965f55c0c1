#include "vrrte/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vrrte/quadrature.hpp"

namespace vrrte {

namespace {
constexpr double kMaxExponent = 700.0;
}

RescaledTemperature::RescaledTemperature(double value) : value_(value) {
  if (!(value >= 0.0)) throw std::domain_error("RescaledTemperature: negative or NaN temperature");
}

FrequencyGrid::FrequencyGrid(std::vector<double> nodes, std::vector<double> weights, double lo, double hi)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), lo_(lo), hi_(hi) {
  if (nodes_.empty() || nodes_.size() != weights_.size())
    throw std::invalid_argument("FrequencyGrid: nodes and weights must be non-empty and of equal size");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > 0.0) || !(weights_[i] > 0.0))
      throw std::invalid_argument("FrequencyGrid: nodes and weights must be positive");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("FrequencyGrid: nodes must be strictly increasing");
  }
}

FrequencyGrid FrequencyGrid::log_panels(double lo, double hi, std::size_t panels, std::size_t nodes_per_panel) {
  if (!(lo > 0.0) || !(hi > lo) || panels == 0)
    throw std::invalid_argument("FrequencyGrid::log_panels: need 0 < lo < hi and panels > 0");
  std::vector<double> edges(panels + 1);
  const double ratio = std::log(hi / lo);
  for (std::size_t p = 0; p <= panels; ++p)
    edges[p] = lo * std::exp(ratio * static_cast<double>(p) / static_cast<double>(panels));
  edges.front() = lo;
  edges.back() = hi;
  QuadratureRule rule = composite_gauss_legendre(edges, nodes_per_panel);
  return FrequencyGrid(std::move(rule.nodes), std::move(rule.weights), lo, hi);
}

FrequencyGrid FrequencyGrid::single(double nu) { return FrequencyGrid({nu}, {1.0}, nu, nu); }

double planck(double nu, double temperature) {
  if (!(nu > 0.0)) throw std::domain_error("planck: frequency must be positive");
  if (!(temperature >= 0.0)) throw std::domain_error("planck: temperature must be non-negative");
  if (temperature == 0.0) return 0.0;
  const double x = nu / temperature;
  if (x > kMaxExponent) return 0.0;
  return nu * nu * nu / std::expm1(x);
}

double planck_dT(double nu, double temperature) {
  if (!(nu > 0.0)) throw std::domain_error("planck_dT: frequency must be positive");
  if (temperature <= 0.0) return 0.0;
  const double x = nu / temperature;
  if (x > kMaxExponent) return 0.0;
  const double em1 = std::expm1(x);
  // nu^3 x e^x / (T (e^x - 1)^2), with e^x / (e^x-1)^2 = 1/em1 + 1/em1^2
  return nu * nu * nu * x / temperature * (1.0 / em1 + 1.0 / (em1 * em1));
}

double spectral_integral(std::span<const double> values, const FrequencyGrid& grid) {
  if (values.size() != grid.size())
    throw std::invalid_argument("spectral_integral: values do not match the frequency grid");
  double sum = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

RescaledTemperature invert_planck_mean(double target, std::span<const double> kappa_a, const FrequencyGrid& grid,
                                       const InversionOptions& options) {
  if (kappa_a.size() != grid.size())
    throw std::invalid_argument("invert_planck_mean: absorption does not match the frequency grid");
  if (!(target >= 0.0)) throw std::domain_error("invert_planck_mean: negative target");
  if (target == 0.0) return RescaledTemperature(0.0);

  const auto nu = grid.nodes();
  const auto w = grid.weights();
  double kappa_total = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (kappa_a[i] < 0.0) throw std::domain_error("invert_planck_mean: negative absorption");
    kappa_total += w[i] * kappa_a[i];
  }
  if (!(kappa_total > 0.0)) throw std::domain_error("invert_planck_mean: absorption integrates to zero");

  auto residual = [&](double t, double* slope) {
    double f = 0.0, df = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      f += w[i] * kappa_a[i] * planck(nu[i], t);
      df += w[i] * kappa_a[i] * planck_dT(nu[i], t);
    }
    if (slope) *slope = df;
    return f - target;
  };

  double lo = 0.0, hi = 1.0;
  while (residual(hi, nullptr) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InversionError("invert_planck_mean: could not bracket the root");
  }

  // Stefan-Boltzmann-like first guess (integral of nu^3/(e^{nu/T}-1) is pi^4 T^4 / 15).
  double t = std::pow(15.0 * target / (std::pow(std::numbers::pi, 4) * kappa_total), 0.25);
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);

  const double tol = options.rtol * target;
  bool satisfied = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    double slope = 0.0;
    const double f = residual(t, &slope);
    if (f < 0.0) lo = t; else hi = t;
    const bool within = std::abs(f) <= tol;
    double next = (slope > 0.0) ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    // Once the residual test passes keep polishing until the step stalls.
    if (within) satisfied = true;
    if (satisfied && step <= 4.0 * std::numeric_limits<double>::epsilon() * t) break;
    if (satisfied && hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    if (it + 1 == options.max_iterations && !satisfied)
      throw InversionError("invert_planck_mean: Newton iteration did not converge");
  }
  return RescaledTemperature(t);
}

}  // namespace vrrte
