#include "vrrte/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "vrrte/fresnel.hpp"
#include "vrrte/quadrature.hpp"

namespace vrrte {

std::optional<double> CharacteristicFrame::cosine_at(double n_z, double n_y) const {
  if (n_z == n_y) return std::abs(mu);
  const double r = n_z / n_y;
  const double rad = 1.0 - r * r * (1.0 - mu * mu);
  if (rad < 0.0) return std::nullopt;
  return std::sqrt(rad);
}

namespace {

// Exponent over [a, b] on one panel with an n-point rule.
double panel_exponent(double a, double b, const QuadratureRule& unit, const CharacteristicFrame& frame,
                      const OpticalMedium& medium, double nu, double n_z, bool& evanescent) {
  double sum = 0.0;
  for (std::size_t q = 0; q < unit.size(); ++q) {
    const double y = a + (b - a) * unit.nodes[q];
    const auto p = medium.properties(y, nu);
    const auto w = frame.cosine_at(n_z, p.n);
    if (!w || *w == 0.0) {
      evanescent = true;
      return 0.0;
    }
    sum += unit.weights[q] * p.kappa / *w;
  }
  return sum * (b - a);
}

}  // namespace

double phi(double z1, double z2, const CharacteristicFrame& frame, const OpticalMedium& medium, double nu) {
  if (z1 > z2) throw std::invalid_argument("phi: need z1 <= z2");
  if (z1 == z2) return 1.0;
  static const QuadratureRule unit = gauss_legendre(8, 0.0, 1.0);
  const double n_z = medium.profile().n_at(frame.z);

  std::vector<double> edges{z1};
  for (double b : medium.breakpoints())
    if (b > z1 && b < z2) edges.push_back(b);
  edges.push_back(z2);

  double total = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    bool evanescent = false;
    double coarse = panel_exponent(edges[s], edges[s + 1], unit, frame, medium, nu, n_z, evanescent);
    if (evanescent) return 0.0;
    for (int pieces = 2; pieces <= 1 << 12; pieces *= 2) {
      const double h = (edges[s + 1] - edges[s]) / pieces;
      double fine = 0.0;
      for (int p = 0; p < pieces; ++p)
        fine += panel_exponent(edges[s] + p * h, edges[s] + (p + 1) * h, unit, frame, medium, nu, n_z, evanescent);
      if (evanescent) return 0.0;
      const bool done = std::abs(fine - coarse) <= 1e-8 * std::abs(fine);
      coarse = fine;
      if (done) break;
    }
    total += coarse;
  }
  return std::exp(-total);
}

double psi(double z, double zp, const CharacteristicFrame& frame, const OpticalMedium& medium, double nu) {
  return phi(std::min(z, zp), std::max(z, zp), frame, medium, nu);
}

std::vector<AngularNode> angular_rule(double ratio, std::size_t nodes_per_panel) {
  std::vector<AngularNode> out;
  if (ratio <= 1.0) {
    const auto g = gauss_legendre(nodes_per_panel, 0.0, 1.0);
    for (std::size_t q = 0; q < g.size(); ++q) out.push_back({g.nodes[q], g.weights[q], refract(ratio, g.nodes[q]).eta});
    return out;
  }
  const double mu_c = critical_cosine(ratio);
  const auto tir = gauss_legendre(nodes_per_panel, 0.0, mu_c);
  for (std::size_t q = 0; q < tir.size(); ++q) out.push_back({tir.nodes[q], tir.weights[q], std::nullopt});
  // mu^2 = 1 - (1 - e^2) / ratio^2, so dmu = e de / (ratio^2 mu).
  const auto g = gauss_legendre(nodes_per_panel, 0.0, 1.0);
  const double r2 = ratio * ratio;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double e = g.nodes[q];
    const double mu = std::sqrt(1.0 - (1.0 - e * e) / r2);
    out.push_back({mu, g.weights[q] * e / (r2 * mu), e});
  }
  return out;
}

std::vector<double> kappa_levels(std::size_t count, double lo, double hi, LevelSpacing spacing) {
  if (count < 2 || !(hi > lo)) throw std::invalid_argument("kappa_levels: need at least two increasing levels");
  if (spacing == LevelSpacing::Geometric && !(lo > 0.0))
    throw std::invalid_argument("kappa_levels: geometric spacing needs lo > 0");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = spacing == LevelSpacing::Uniform ? lo + (hi - lo) * s : lo * std::pow(hi / lo, s);
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

LevelBracket bracket(const std::vector<double>& levels, double kappa_bar) {
  const double eps = 1e-12 * levels.back();
  if (kappa_bar < levels.front() - eps || kappa_bar > levels.back() + eps)
    throw std::out_of_range("kappa-bar outside the tabulated range");
  if (levels.size() == 1) return {0, 0, 0.0};
  auto it = std::upper_bound(levels.begin(), levels.end(), kappa_bar);
  std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - levels.begin()), 1, levels.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = std::clamp((kappa_bar - levels[lo]) / (levels[hi] - levels[lo]), 0.0, 1.0);
  return {lo, hi, t};
}

LevelStencil level_stencil(const std::vector<double>& levels, double kappa_bar, LevelInterpolation how) {
  const auto b = bracket(levels, kappa_bar);
  LevelStencil st;
  if (b.t == 0.0 || b.t == 1.0) {
    st.index[0] = b.t == 0.0 ? b.lo : b.hi;
    st.weight[0] = 1.0;
    st.size = 1;
    return st;
  }
  if (how == LevelInterpolation::Linear || levels.size() < 4 || !(levels.front() > 0.0)) {
    st.index = {b.lo, b.hi, 0, 0};
    st.weight = {1.0 - b.t, b.t, 0.0, 0.0};
    st.size = 2;
    return st;
  }
  const std::size_t first = std::min(b.lo > 0 ? b.lo - 1 : 0, levels.size() - 4);
  const double x = std::log(kappa_bar);
  std::array<double, 4> xs{};
  for (std::size_t a = 0; a < 4; ++a) xs[a] = std::log(levels[first + a]);
  for (std::size_t a = 0; a < 4; ++a) {
    double w = 1.0;
    for (std::size_t c = 0; c < 4; ++c)
      if (c != a) w *= (x - xs[c]) / (xs[a] - xs[c]);
    st.index[a] = first + a;
    st.weight[a] = w;
  }
  st.size = 4;
  return st;
}

TransmissionTable::TransmissionTable(const ColumnGrid& grid, std::vector<double> levels,
                                     std::size_t nodes_per_panel, LevelInterpolation interpolation)
    : n_(grid.size()), levels_(std::move(levels)), interpolation_(interpolation) {
  if (levels_.empty()) throw std::invalid_argument("TransmissionTable: no levels");
  data_.assign(levels_.size() * 4 * n_ * n_, 0.0);
  const auto& layers = grid.layers();
  const std::size_t interface_lower = layers.front().last;
  const std::size_t interface_upper = grid.has_interface() ? layers.back().first : interface_lower;

  std::vector<std::vector<AngularNode>> rules;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const double far_n = layers.size() == 2 ? layers[1 - l].n : layers[l].n;
    rules.push_back(angular_rule(layers[l].n / far_n, nodes_per_panel));
  }

  for (std::size_t lev = 0; lev < levels_.size(); ++lev) {
    const double kb = levels_[lev];
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t li = grid.layer_of(i);
      for (std::size_t jn = 0; jn < n_; ++jn) {
        const std::size_t lj = grid.layer_of(jn);
        std::array<double, 4> acc{};
        for (const auto& node : rules[li]) {
          double tau;
          double eta;
          if (li == lj) {
            tau = std::abs(grid.column_mass(i) - grid.column_mass(jn)) * kb / node.mu;
            eta = node.mu;
          } else {
            if (!node.far_mu || *node.far_mu == 0.0) continue;
            const std::size_t yi = li == 0 ? interface_lower : interface_upper;
            const std::size_t yj = lj == 0 ? interface_lower : interface_upper;
            tau = kb * (std::abs(grid.column_mass(i) - grid.column_mass(yi)) / node.mu +
                        std::abs(grid.column_mass(jn) - grid.column_mass(yj)) / *node.far_mu);
            eta = *node.far_mu;
          }
          const double f = node.weight * std::exp(-tau);
          const double m2 = node.mu * node.mu;
          const double e2 = eta * eta;
          acc[0] += f;
          acc[1] += f * e2;
          acc[2] += f * m2;
          acc[3] += f * m2 * e2;
        }
        for (int kk = 0; kk < 2; ++kk)
          for (int jj = 0; jj < 2; ++jj) data_[index(lev, 2 * kk, 2 * jj, i, jn)] = acc[2 * kk + jj];
      }
    }
  }
}

std::size_t TransmissionTable::index(std::size_t level, int k, int j, std::size_t i, std::size_t jn) const {
  if ((k != 0 && k != 2) || (j != 0 && j != 2)) throw std::invalid_argument("TransmissionTable: k and j must be 0 or 2");
  const std::size_t slot = static_cast<std::size_t>(k / 2 * 2 + j / 2);
  return ((level * 4 + slot) * n_ + i) * n_ + jn;
}

double TransmissionTable::at_level(int k, int j, std::size_t i, std::size_t jn, std::size_t level) const {
  return data_.at(index(level, k, j, i, jn));
}

double TransmissionTable::value(int k, int j, std::size_t i, std::size_t jn, double kappa_bar) const {
  const auto st = level_stencil(levels_, kappa_bar, interpolation_);
  double v = 0.0;
  for (std::size_t a = 0; a < st.size; ++a) v += st.weight[a] * at_level(k, j, i, jn, st.index[a]);
  return v;
}

}  // namespace vrrte
