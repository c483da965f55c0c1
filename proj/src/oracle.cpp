#include "vrrte/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vrrte/quadrature.hpp"

namespace vrrte {

OrdinateSet OrdinateSet::gauss(std::size_t per_panel, double split) {
  OrdinateSet o;
  auto add = [&](const QuadratureRule& r) {
    o.mu.insert(o.mu.end(), r.nodes.begin(), r.nodes.end());
    o.weight.insert(o.weight.end(), r.weights.begin(), r.weights.end());
  };
  if (split > 0.0) {
    add(gauss_legendre(per_panel, 0.0, split));
    add(gauss_legendre(per_panel, split, 1.0));
  } else {
    add(gauss_legendre(per_panel, 0.0, 1.0));
  }
  std::vector<double> support{1e-9, 1.0};
  if (split > 0.0) support.push_back(split);
  for (double s : support) {
    o.mu.push_back(s);
    o.weight.push_back(0.0);
  }
  std::vector<std::size_t> idx(o.mu.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return o.mu[a] < o.mu[b]; });
  OrdinateSet sorted;
  for (auto i : idx) {
    sorted.mu.push_back(o.mu[i]);
    sorted.weight.push_back(o.weight[i]);
  }
  return sorted;
}

double OrdinateSet::total_weight() const { return 2.0 * std::accumulate(weight.begin(), weight.end(), 0.0); }

namespace {

// A layer on the refined grid.
struct FineLayer {
  std::vector<double> z;
  std::vector<double> kappa_bar_rho;  // per fine cell, times kappa-bar later
  std::vector<std::array<double, 4>> src;  // s0, s2, s0p, s2p per fine node
  std::vector<std::size_t> coarse;         // solver node -> fine index
  std::size_t first = 0, last = 0;         // solver node range
  double n = 1.0;
};

FineLayer refine_layer(const ColumnModel& model, const SourceField& S, std::size_t q, const Layer& L,
                       std::size_t refine) {
  const auto& g = model.grid();
  const auto& rho = model.medium().density();
  const auto c = static_cast<Eigen::Index>(q);
  FineLayer f;
  f.first = L.first;
  f.last = L.last;
  f.n = L.n;
  auto value = [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    return std::array<double, 4>{S.s0(r, c), S.s2(r, c), S.s0p(r, c), S.s2p(r, c)};
  };
  for (std::size_t i = L.first; i <= L.last; ++i) {
    f.coarse.push_back(f.z.size());
    f.z.push_back(g.z(i));
    f.src.push_back(value(i));
    if (i == L.last) break;
    const double h = g.cell_length(i);
    // Coincident nodes at a breakpoint: a zero-length cell with a jump in source.
    if (h == 0.0) {
      f.kappa_bar_rho.push_back(0.0);
      continue;
    }
    const auto a = value(i), b = value(i + 1);
    const double cell_rho = rho.at(0.5 * (g.z(i) + g.z(i + 1)));
    for (std::size_t k = 1; k < refine; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(refine);
      f.kappa_bar_rho.push_back(cell_rho);
      f.z.push_back(g.z(i) + t * h);
      std::array<double, 4> v{};
      for (int j = 0; j < 4; ++j) v[j] = (1.0 - t) * a[j] + t * b[j];
      f.src.push_back(v);
    }
    f.kappa_bar_rho.push_back(cell_rho);
  }
  return f;
}

// Upwind sweep of one direction across a fine layer. up = true marches from
// z.front() to z.back(). Returns the exit intensity; stores values at the
// solver nodes into out (indexed like f.coarse).
Vec2 sweep(const FineLayer& f, double kb, double m, bool up, Vec2 I, std::vector<Vec2>* at_nodes) {
  const std::size_t n = f.z.size();
  std::vector<Vec2> all;
  if (at_nodes) all.assign(n, Vec2::Zero());
  auto source = [&](std::size_t i) {
    const auto& s = f.src[i];
    return Vec2(s[0] + m * m * s[1], s[2] + m * m * s[3]);
  };
  auto step = [&](std::size_t from, std::size_t to, std::size_t cell) {
    const double h = std::abs(f.z[to] - f.z[from]);
    const double kappa = kb * f.kappa_bar_rho[cell];
    if (h == 0.0 || kappa == 0.0) {
      if (h > 0.0) I += 0.5 * (source(from) + source(to)) * h / m;
      return;
    }
    const double dtau = kappa * h / m;
    const double e = std::exp(-dtau);
    I = I * e + 0.5 * (source(from) + source(to)) * (-std::expm1(-dtau)) / kappa;
  };
  if (up) {
    if (at_nodes) all[0] = I;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      step(i, i + 1, i);
      if (at_nodes) all[i + 1] = I;
    }
  } else {
    if (at_nodes) all[n - 1] = I;
    for (std::size_t i = n - 1; i > 0; --i) {
      step(i, i - 1, i - 1);
      if (at_nodes) all[i - 1] = I;
    }
  }
  if (at_nodes) {
    at_nodes->clear();
    for (auto idx : f.coarse) at_nodes->push_back(all[idx]);
  }
  return I;
}

}  // namespace

MomentField sweep_reference(const ColumnModel& model, const SourceField& S, const BoundaryData& boundary,
                            const OracleOptions& options) {
  if (options.refine < 1 || options.ordinates < 2) throw std::invalid_argument("sweep_reference: bad options");
  const auto& g = model.grid();
  const auto& layers = g.layers();
  const bool two = g.has_interface();
  const Vec2 bvec = S.basis == Basis::IQ ? Vec2(1.0, 0.0) : Vec2(0.5, 0.5);
  MomentField out = MomentField::zeros(model.nodes(), model.bands());

  std::vector<OrdinateSet> ords;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const double ratio = two ? layers[l].n / layers[1 - l].n : 1.0;
    ords.push_back(OrdinateSet::gauss(options.ordinates, critical_cosine(ratio)));
  }

  for (std::size_t q = 0; q < model.bands(); ++q) {
    const double nu = model.frequencies().nodes()[q];
    const double kb = model.kappa_bar(q);
    std::vector<FineLayer> fl;
    for (const auto& L : layers) fl.push_back(refine_layer(model, S, q, L, options.refine));

    // up[l][d], down[l][d]: node intensities of direction d in layer l.
    std::vector<std::vector<std::vector<Vec2>>> up(layers.size()), down(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      up[l].resize(ords[l].mu.size());
      down[l].resize(ords[l].mu.size());
    }

    if (!two) {
      for (std::size_t d = 0; d < ords[0].mu.size(); ++d) {
        const double m = ords[0].mu[d];
        sweep(fl[0], kb, m, true, bvec * m * boundary.bottom(nu), &up[0][d]);
        sweep(fl[0], kb, m, false, bvec * m * boundary.top(nu), &down[0][d]);
      }
    } else {
      // Light arriving at the interface from each side.
      std::vector<Vec2> arrive_lower(ords[0].mu.size()), arrive_upper(ords[1].mu.size());
      for (std::size_t d = 0; d < ords[0].mu.size(); ++d) {
        const double m = ords[0].mu[d];
        arrive_lower[d] = sweep(fl[0], kb, m, true, bvec * m * boundary.bottom(nu), &up[0][d]);
      }
      for (std::size_t d = 0; d < ords[1].mu.size(); ++d) {
        const double m = ords[1].mu[d];
        arrive_upper[d] = sweep(fl[1], kb, m, false, bvec * m * boundary.top(nu), &down[1][d]);
      }
      const double r = layers[0].n / layers[1].n;
      for (std::size_t l = 0; l < 2; ++l) {
        const double ratio = l == 0 ? r : 1.0 / r;
        const auto& own = l == 0 ? arrive_lower : arrive_upper;
        const auto& far = l == 0 ? arrive_upper : arrive_lower;
        const auto& far_ords = ords[1 - l];
        for (std::size_t d = 0; d < ords[l].mu.size(); ++d) {
          const double m = ords[l].mu[d];
          const auto refr = refract(ratio, m);
          Vec2 leave = Vec2::Zero();
          if (options.fresnel) {
            const auto ops = interface_operators(ratio, m, S.basis);
            leave = ops.X * own[d];
            if (refr.eta) leave += ops.Y * far_ords.interpolate(far, *refr.eta);
          } else if (refr.eta) {
            leave = far_ords.interpolate(far, *refr.eta);
          }
          if (l == 0) sweep(fl[0], kb, m, false, leave, &down[0][d]);
          else sweep(fl[1], kb, m, true, leave, &up[1][d]);
        }
      }
    }

    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto& L = layers[l];
      for (std::size_t i = L.first; i <= L.last; ++i) {
        Vec2 m0 = Vec2::Zero(), m2 = Vec2::Zero();
        for (std::size_t d = 0; d < ords[l].mu.size(); ++d) {
          const double w = 0.5 * ords[l].weight[d];
          if (w == 0.0) continue;
          const double mu = ords[l].mu[d];
          const Vec2 sum = up[l][d][i - L.first] + down[l][d][i - L.first];
          m0 += w * sum;
          m2 += w * mu * mu * sum;
        }
        const auto r = static_cast<Eigen::Index>(i);
        const auto c = static_cast<Eigen::Index>(q);
        if (S.basis == Basis::IQ) {
          out.J0(r, c) = m0(0);
          out.K0(r, c) = m0(1);
          out.J2(r, c) = m2(0);
          out.K2(r, c) = m2(1);
        } else {
          out.J0(r, c) = m0(0) + m0(1);
          out.K0(r, c) = m0(0) - m0(1);
          out.J2(r, c) = m2(0) + m2(1);
          out.K2(r, c) = m2(0) - m2(1);
        }
      }
    }
  }
  return out;
}

double analytic_absorption(double z, double mu, double kappa, double Z, const BoundaryData& boundary, double nu) {
  if (mu == 0.0 || std::abs(mu) > 1.0) throw std::invalid_argument("analytic_absorption: need 0 < |mu| <= 1");
  if (z < 0.0 || z > Z) throw std::out_of_range("analytic_absorption: altitude outside [0, Z]");
  if (mu > 0.0) return mu * boundary.bottom(nu) * std::exp(-kappa * z / mu);
  const double m = -mu;
  return m * boundary.top(nu) * std::exp(-kappa * (Z - z) / m);
}

}  // namespace vrrte
