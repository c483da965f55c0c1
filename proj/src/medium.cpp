#include "vrrte/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace vrrte {

// ---------------------------------------------------------------------------
// RefractiveProfile

RefractiveProfile RefractiveProfile::step(double epsilon, double Y, double Z) {
  RefractiveProfile p{Y, Z, 1.0, 1.0 + epsilon};
  p.validate();
  return p;
}

void RefractiveProfile::validate() const {
  if (!(Y > 0.0 && Y < Z)) throw std::invalid_argument("RefractiveProfile: need 0 < Y < Z");
  if (!(n_lower > 0.0 && n_upper > 0.0)) throw std::invalid_argument("RefractiveProfile: indices must be positive");
}

double RefractiveProfile::n_at(double z, Side side_at_interface) const {
  if (z < 0.0 || z > Z) throw std::out_of_range("RefractiveProfile::n_at: altitude outside [0, Z]");
  if (z < Y) return n_lower;
  if (z > Y) return n_upper;
  return side_at_interface == Side::Lower ? n_lower : n_upper;
}

// ---------------------------------------------------------------------------
// AbsorptionTable

AbsorptionTable AbsorptionTable::constant(double kappa_bar) {
  if (!(kappa_bar > 0.0)) throw std::invalid_argument("AbsorptionTable::constant: kappa-bar must be positive");
  AbsorptionTable t;
  t.nu_ = {1.0};
  t.kappa_ = {kappa_bar};
  return t;
}

AbsorptionTable AbsorptionTable::from_text(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double lambda = 0.0, kappa = 0.0;
    std::string extra;
    if (!(fields >> lambda >> kappa) || (fields >> extra))
      throw std::invalid_argument("absorption table: malformed row at line " + std::to_string(line_no));
    if (!(lambda > 0.0))
      throw std::invalid_argument("absorption table: non-positive wavelength at line " + std::to_string(line_no));
    if (!(kappa >= 0.0))
      throw std::invalid_argument("absorption table: negative kappa at line " + std::to_string(line_no));
    rows.emplace_back(frequency_from_wavelength(lambda), kappa);
  }
  if (rows.size() < 2) throw std::invalid_argument("absorption table: need at least two rows");
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].first == rows[i - 1].first)
      throw std::invalid_argument("absorption table: duplicate wavelength");

  AbsorptionTable t;
  for (const auto& [nu, k] : rows) {
    t.nu_.push_back(nu);
    t.kappa_.push_back(k);
  }
  return t;
}

AbsorptionTable AbsorptionTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("absorption table: cannot open " + path);
  return from_text(in);
}

double AbsorptionTable::base(double nu) const {
  if (nu_.size() == 1) return kappa_.front();
  if (nu <= nu_.front()) return kappa_.front();
  if (nu >= nu_.back()) return kappa_.back();
  const auto it = std::upper_bound(nu_.begin(), nu_.end(), nu);
  const std::size_t hi = static_cast<std::size_t>(it - nu_.begin());
  const std::size_t lo = hi - 1;
  const double t = (nu - nu_[lo]) / (nu_[hi] - nu_[lo]);
  return (1.0 - t) * kappa_[lo] + t * kappa_[hi];
}

double AbsorptionTable::operator()(double nu) const {
  double k = base(nu);
  const double lambda = wavelength_um(nu);
  for (const auto& b : bands_) {
    if (lambda < b.lambda_lo_um || lambda > b.lambda_hi_um) continue;
    switch (b.rule) {
      case BandRule::Set: k = b.value; break;
      case BandRule::RaiseTo: k = std::max(k, b.value); break;
      case BandRule::Scale: k *= b.value; break;
    }
  }
  return k;
}

bool AbsorptionTable::in_band(double nu) const {
  const double lambda = wavelength_um(nu);
  return std::any_of(bands_.begin(), bands_.end(),
                     [&](const AbsorptionBand& b) { return lambda >= b.lambda_lo_um && lambda <= b.lambda_hi_um; });
}

AbsorptionTable AbsorptionTable::with_bands(const std::vector<AbsorptionBand>& bands) const {
  AbsorptionTable out = *this;
  for (const auto& b : bands) {
    if (!(b.lambda_lo_um > 0.0) || !(b.lambda_hi_um > b.lambda_lo_um))
      throw std::invalid_argument("absorption band: need 0 < lambda_lo < lambda_hi");
    if (!is_constant()) {
      const double lambda_min = wavelength_um(nu_.back());
      const double lambda_max = wavelength_um(nu_.front());
      if (b.lambda_lo_um < lambda_min || b.lambda_hi_um > lambda_max)
        throw std::invalid_argument("absorption band: interval outside the table's wavelength range");
    }
    for (const auto& other : out.bands_)
      if (b.lambda_lo_um <= other.lambda_hi_um && other.lambda_lo_um <= b.lambda_hi_um)
        throw std::invalid_argument("absorption band: overlapping bands");
    if (b.rule == BandRule::Scale ? !(b.value > 0.0) : !(b.value > 0.0 && b.value <= kKappaBarMax))
      spdlog::warn("absorption band [{}, {}] um: rule value {} leaves the tabulated kappa range (0, {}]",
                   b.lambda_lo_um, b.lambda_hi_um, b.value, kKappaBarMax);
    out.bands_.push_back(b);
  }
  return out;
}

AbsorptionTable apply_co2_modifier(const AbsorptionTable& table, const std::vector<AbsorptionBand>& bands) {
  return table.with_bands(bands);
}

// ---------------------------------------------------------------------------
// DensityProfile / AlbedoParams

void DensityProfile::validate() const {
  if (values.size() != breaks.size() + 1)
    throw std::invalid_argument("DensityProfile: need one more value than breakpoints");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1])) throw std::invalid_argument("DensityProfile: breakpoints must increase");
  for (double v : values)
    if (!(v > 0.0)) throw std::invalid_argument("DensityProfile: density must be positive");
}

double DensityProfile::at(double z) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), z);
  return values[static_cast<std::size_t>(it - breaks.begin())];
}

void AlbedoParams::validate() const {
  if (!(a1 >= 0.0 && a1 < 1.0) || !(a2 >= 0.0 && a2 < 1.0))
    throw std::invalid_argument("albedo: a1 and a2 must lie in [0, 1)");
  if (!(z1 <= z2)) throw std::invalid_argument("albedo: need z1 <= z2");
  if (!(nu1 < nu2) || !(nu2 > 0.0)) throw std::invalid_argument("albedo: need nu1 < nu2");
}

double AlbedoParams::at(double z, double nu) const {
  double a = 0.0;
  if (z > z1 && z < z2) a += a1;
  if (z > z2 && nu > nu1 && nu < nu2) {
    const double r = nu / nu2;
    a += a2 * r * r * r * r;
  }
  return a;
}

// ---------------------------------------------------------------------------
// OpticalMedium

OpticalMedium::OpticalMedium(RefractiveProfile profile, AbsorptionTable table, DensityProfile density,
                             AlbedoParams albedo, double beta)
    : profile_(profile), table_(std::move(table)), density_(std::move(density)), albedo_(albedo), beta_(beta) {
  profile_.validate();
  density_.validate();
  albedo_.validate();
  if (!(beta_ >= 0.0 && beta_ <= 1.0)) throw std::invalid_argument("OpticalMedium: beta must lie in [0, 1]");
  const auto& v = table_.values();
  const double kmin = *std::min_element(v.begin(), v.end());
  if (kmin < kKappaBarMin)
    spdlog::warn("absorption table has kappa-bar values down to {}; clamping to {}", kmin, kKappaBarMin);
}

double OpticalMedium::kappa_bar(double nu) const { return std::max(table_(nu), kKappaBarMin); }

LocalProperties OpticalMedium::properties(double z, double nu, Side side_at_interface) const {
  if (z < 0.0 || z > profile_.Z) throw std::out_of_range("OpticalMedium::properties: altitude outside [0, Z]");
  LocalProperties p{};
  p.n = profile_.n_at(z, side_at_interface);
  p.kappa = density_.at(z) * kappa_bar(nu);
  p.kappa_s = p.kappa * albedo_.at(z, nu);
  p.kappa_a = p.kappa - p.kappa_s;
  p.beta = beta_;
  return p;
}

std::vector<double> OpticalMedium::breakpoints() const {
  std::vector<double> pts = density_.breaks;
  pts.push_back(profile_.Y);
  pts.push_back(albedo_.z1);
  pts.push_back(albedo_.z2);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::erase_if(pts, [&](double z) { return !(z > 0.0 && z < profile_.Z); });
  return pts;
}

// ---------------------------------------------------------------------------
// ColumnGrid

ColumnGrid ColumnGrid::build(const OpticalMedium& medium, std::size_t intervals, bool with_interface) {
  if (intervals < 2) throw std::invalid_argument("ColumnGrid: need at least two intervals");
  const auto& prof = medium.profile();
  if (!with_interface && !prof.continuous())
    throw std::invalid_argument("ColumnGrid: a grid without interface needs a continuous index");
  const double h = prof.Z / static_cast<double>(intervals);

  std::vector<double> ends{0.0};
  for (double b : medium.breakpoints()) ends.push_back(b);
  ends.push_back(prof.Z);

  ColumnGrid g;
  for (std::size_t s = 0; s + 1 < ends.size(); ++s) {
    const double lo = ends[s], hi = ends[s + 1];
    const std::size_t layer = (with_interface && lo >= prof.Y) ? 1 : 0;
    const double mid = 0.5 * (lo + hi);
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround((hi - lo) / h)));
    for (std::size_t k = 0; k <= m; ++k) {
      g.z_.push_back(k == m ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(m));
      g.node_layer_.push_back(layer);
      g.property_z_.push_back(mid);
    }
  }

  const std::size_t n = g.z_.size();
  for (std::size_t l = 0; l <= (with_interface ? 1u : 0u); ++l) {
    Layer L;
    L.first = n;
    for (std::size_t i = 0; i < n; ++i)
      if (g.node_layer_[i] == l) {
        L.first = std::min(L.first, i);
        L.last = i;
      }
    L.z_lo = g.z_[L.first];
    L.z_hi = g.z_[L.last];
    L.n = l == 0 ? prof.n_lower : prof.n_upper;
    g.layers_.push_back(L);
  }

  g.cell_rho_.assign(n, 0.0);
  g.mass_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (g.property_z_[i] == g.property_z_[i + 1]) g.cell_rho_[i] = medium.density().at(g.property_z_[i]);
    g.mass_[i + 1] = g.mass_[i] + g.cell_rho_[i] * (g.z_[i + 1] - g.z_[i]);
  }
  return g;
}

std::size_t ColumnGrid::nearest(double z, Side side) const {
  std::size_t best = 0;
  double best_d = std::abs(z_[0] - z);
  for (std::size_t i = 1; i < z_.size(); ++i) {
    const double d = std::abs(z_[i] - z);
    if (d < best_d || (d == best_d && side == Side::Upper)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace vrrte
