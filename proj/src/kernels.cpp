#include "vrrte/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vrrte {

namespace {

Vec2 boundary_vector(Basis basis) { return basis == Basis::IQ ? Vec2(1.0, 0.0) : Vec2(0.5, 0.5); }

// 1/|omega| on source paths, or 1 for the literal kernel.
double path_factor(double m, const FormulationOptions& f) { return f.source_path_jacobian ? 1.0 / m : 1.0; }

// int_0^1 exp(-x u) du and int_0^1 u exp(-x u) du.
void exp_moments(double x, double& f0, double& f1) {
  if (x < 0.05) {
    const double x2 = x * x;
    f0 = 1.0 - x / 2.0 + x2 / 6.0 - x2 * x / 24.0 + x2 * x2 / 120.0 - x2 * x2 * x / 720.0 + x2 * x2 * x2 / 5040.0;
    f1 = 0.5 - x / 3.0 + x2 / 8.0 - x2 * x / 30.0 + x2 * x2 / 144.0 - x2 * x2 * x / 840.0 + x2 * x2 * x2 / 5760.0;
    return;
  }
  const double e = std::exp(-x);
  f0 = -std::expm1(-x) / x;
  f1 = (1.0 - e * (1.0 + x)) / (x * x);
}

// Weights of the near and far end of a cell for a linear source seen along a
// ray of cosine m, before attenuation from the near end to the receiver.
struct CellWeights {
  double near = 0.0;
  double far = 0.0;
};

CellWeights cell_weights(double kappa, double h, double m, const FormulationOptions& f) {
  if (h <= 0.0) return {};
  double f0, f1;
  exp_moments(kappa * h / m, f0, f1);
  const double base = h * path_factor(m, f);
  return {base * (f0 - f1), base * f1};
}

struct TransferPair {
  Mat2 R = Mat2::Zero();
  Mat2 T = Mat2::Zero();
};

// Reflection and transmission for the requested part.
TransferPair transfer(double ratio, double m, bool real, KernelPart part, Basis basis) {
  TransferPair tp;
  const Mat2 cont = real ? Mat2(Mat2::Identity()) : Mat2(Mat2::Zero());
  if (part == KernelPart::Direct) {
    tp.T = cont;
    return tp;
  }
  const auto ops = interface_operators(ratio, m, basis);
  tp.R = ops.X;
  tp.T = part == KernelPart::Combined ? ops.Y : Mat2(ops.Y - cont);
  return tp;
}

// Far-side boundary vector transmitted through the interface, per unit c B.
// datum is the boundary cosine e; ratio is n_z / n_boundary.
Vec2 far_boundary(const Mat2& Y, bool real, double e, double ratio, bool literal, KernelPart part, Vec2 bvec) {
  if (!real) return Vec2::Zero();
  const Vec2 direct = bvec * e;
  const Vec2 iface = Y * bvec * e - bvec * (literal ? ratio : e);
  switch (part) {
    case KernelPart::Direct: return direct;
    case KernelPart::Interface: return iface;
    case KernelPart::Combined: return direct + iface;
  }
  return Vec2::Zero();
}

// Interface node on the side of layer l.
std::size_t interface_node(const ColumnGrid& grid, std::size_t l) {
  return l == 0 ? grid.layers()[0].last : grid.layers()[1].first;
}

// Coefficients of the source values on the nodes of layer l for the ray that
// leaves the layer through its interface node with cosine m.
void ray_to_interface(const ColumnGrid& grid, std::size_t l, double kb, double m, const FormulationOptions& f,
                      Eigen::VectorXd& a) {
  const auto& L = grid.layers()[l];
  const double my = grid.column_mass(interface_node(grid, l));
  for (std::size_t c = L.first; c < L.last; ++c) {
    const auto cw = cell_weights(kb * grid.cell_rho(c), grid.cell_length(c), m, f);
    if (cw.near == 0.0 && cw.far == 0.0) continue;
    if (l == 0) {
      const double att = std::exp(-kb * (my - grid.column_mass(c + 1)) / m);
      a(c + 1) += cw.near * att;
      a(c) += cw.far * att;
    } else {
      const double att = std::exp(-kb * (grid.column_mass(c) - my) / m);
      a(c) += cw.near * att;
      a(c + 1) += cw.far * att;
    }
  }
}

double ipow(double x, int p) { return p == 0 ? 1.0 : (p == 2 ? x * x : x * x * x * x); }

}  // namespace

MomentKernel build_moment_kernel(const ColumnGrid& grid, double kappa_bar, const KernelSettings& settings) {
  if (!(kappa_bar > 0.0)) throw std::invalid_argument("build_moment_kernel: kappa-bar must be positive");
  const std::size_t N = grid.size();
  const auto& f = settings.formulation;
  const Vec2 bvec = boundary_vector(settings.basis);
  const double kb = kappa_bar;

  MomentKernel K;
  K.kappa_bar = kappa_bar;
  for (auto& a : K.W)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& d : c) d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (int k = 0; k < 2; ++k) {
    K.bE[k] = Eigen::MatrixX2d::Zero(static_cast<Eigen::Index>(N), 2);
    K.bS[k] = Eigen::MatrixX2d::Zero(static_cast<Eigen::Index>(N), 2);
  }

  const auto& layers = grid.layers();
  const bool two = grid.has_interface();
  const bool with_direct = settings.part != KernelPart::Interface;

  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    const double ratio = two ? L.n / layers[1 - l].n : 1.0;
    const auto rule = angular_rule(ratio, settings.mu_nodes);
    const auto rows = static_cast<Eigen::Index>(L.first);
    const auto nrows = static_cast<Eigen::Index>(L.last - L.first + 1);

    // In-layer paths: straight rays between nodes of the same layer plus the
    // boundaries the layer touches.
    if (with_direct) {
      std::array<Eigen::MatrixXd, 3> D;
      for (auto& d : D) d = Eigen::MatrixXd::Zero(nrows, nrows);
      std::vector<CellWeights> cw(L.last - L.first + 1);
      for (const auto& node : rule) {
        const double m = node.mu;
        for (std::size_t c = L.first; c < L.last; ++c)
          cw[c - L.first] = cell_weights(kb * grid.cell_rho(c), grid.cell_length(c), m, f);
        const double c0 = 0.5 * node.weight, c2 = c0 * m * m, c4 = c2 * m * m;
        for (std::size_t i = L.first; i <= L.last; ++i) {
          const auto ri = static_cast<Eigen::Index>(i - L.first);
          auto add = [&](std::size_t j, double v) {
            const auto cj = static_cast<Eigen::Index>(j - L.first);
            D[0](ri, cj) += c0 * v;
            D[1](ri, cj) += c2 * v;
            D[2](ri, cj) += c4 * v;
          };
          const double mi = grid.column_mass(i);
          for (std::size_t c = L.first; c < i; ++c) {
            const auto& w = cw[c - L.first];
            if (w.near == 0.0 && w.far == 0.0) continue;
            const double att = std::exp(-kb * (mi - grid.column_mass(c + 1)) / m);
            add(c + 1, w.near * att);
            add(c, w.far * att);
          }
          for (std::size_t c = i; c < L.last; ++c) {
            const auto& w = cw[c - L.first];
            if (w.near == 0.0 && w.far == 0.0) continue;
            const double att = std::exp(-kb * (grid.column_mass(c) - mi) / m);
            add(c, w.near * att);
            add(c + 1, w.far * att);
          }
          for (int k = 0; k < 2; ++k) {
            const double wk = 0.5 * node.weight * ipow(m, 2 * k) * m;
            if (L.first == 0)
              K.bE[k].row(static_cast<Eigen::Index>(i)) += wk * std::exp(-kb * (mi - grid.column_mass(0)) / m) * bvec.transpose();
            if (L.last == N - 1)
              K.bS[k].row(static_cast<Eigen::Index>(i)) += wk * std::exp(-kb * (grid.column_mass(N - 1) - mi) / m) * bvec.transpose();
          }
        }
      }
      for (int k = 0; k < 2; ++k)
        for (int c = 0; c < 2; ++c)
          for (int r = 0; r < 2; ++r) K.W[k][c][r][r].block(rows, rows, nrows, nrows) += D[k + c];
    }

    if (!two) continue;

    // Paths that meet the interface: reflection of the own layer's light and
    // transmission of the far layer's light.
    const std::size_t far = 1 - l;
    const auto& F = layers[far];
    const auto frows = static_cast<Eigen::Index>(F.first);
    const auto nfar = static_cast<Eigen::Index>(F.last - F.first + 1);
    const double m_y = grid.column_mass(interface_node(grid, l));
    const double m_yf = grid.column_mass(interface_node(grid, far));
    const double m_own_b = grid.column_mass(l == 0 ? 0 : N - 1);
    const double m_far_b = grid.column_mass(far == 0 ? 0 : N - 1);
    auto& b_own = l == 0 ? K.bE : K.bS;
    auto& b_far = l == 0 ? K.bS : K.bE;
    const bool literal = f.literal_alpha_ratio && l == 1;

    Eigen::VectorXd g(nrows), a_own(static_cast<Eigen::Index>(N)), a_far(static_cast<Eigen::Index>(N));
    for (const auto& node : rule) {
      const double m = node.mu;
      const bool real = node.far_mu.has_value() && *node.far_mu > 0.0;
      const double e = real ? *node.far_mu : 0.0;
      const auto tp = transfer(ratio, m, real, settings.part, settings.basis);

      for (std::size_t i = L.first; i <= L.last; ++i)
        g(static_cast<Eigen::Index>(i - L.first)) = std::exp(-kb * std::abs(grid.column_mass(i) - m_y) / m);

      a_own.setZero();
      ray_to_interface(grid, l, kb, m, f, a_own);
      const double bo = m * std::exp(-kb * std::abs(m_y - m_own_b) / m);
      a_far.setZero();
      double att_f = 0.0;
      if (real) {
        ray_to_interface(grid, far, kb, e, f, a_far);
        att_f = std::exp(-kb * std::abs(m_yf - m_far_b) / e);
      }
      Mat2 Yfull = Mat2::Zero();
      if (settings.part != KernelPart::Direct) Yfull = interface_operators(ratio, m, settings.basis).Y;
      const Vec2 rb = tp.R * bvec * bo;
      const Vec2 tb = far_boundary(Yfull, real, e, ratio, literal, settings.part, bvec) * att_f;

      const auto a_own_seg = a_own.segment(rows, nrows);
      const auto a_far_seg = a_far.segment(frows, nfar);
      for (int k = 0; k < 2; ++k) {
        const Eigen::VectorXd Gk = (0.5 * node.weight * ipow(m, 2 * k)) * g;
        for (int c = 0; c < 2; ++c) {
          const double mc = ipow(m, 2 * c), ec = ipow(e, 2 * c);
          for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) {
              auto& W = K.W[k][c][r][s];
              if (tp.R(r, s) != 0.0)
                W.block(rows, rows, nrows, nrows).noalias() += (tp.R(r, s) * mc) * Gk * a_own_seg.transpose();
              if (real && tp.T(r, s) != 0.0)
                W.block(rows, frows, nrows, nfar).noalias() += (tp.T(r, s) * ec) * Gk * a_far_seg.transpose();
            }
        }
        for (int r = 0; r < 2; ++r) {
          b_own[k].col(r).segment(rows, nrows) += rb(r) * Gk;
          b_far[k].col(r).segment(rows, nrows) += tb(r) * Gk;
        }
      }
    }
  }
  return K;
}

Eigen::MatrixX4d apply_kernel(const MomentKernel& K, const Eigen::MatrixX4d& S, double boundary_E,
                              double boundary_S) {
  const auto N = K.bE[0].rows();
  if (S.rows() != N) throw std::invalid_argument("apply_kernel: source/grid size mismatch");
  Eigen::MatrixX4d M = Eigen::MatrixX4d::Zero(N, 4);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r) {
      auto col = M.col(2 * k + r);
      for (int c = 0; c < 2; ++c)
        for (int s = 0; s < 2; ++s) col.noalias() += K.W[k][c][r][s] * S.col(2 * c + s);
      col += boundary_E * K.bE[k].col(r) + boundary_S * K.bS[k].col(r);
    }
  return M;
}

// ---------------------------------------------------------------------------
// Cache

namespace {

constexpr char kMagic[8] = {'V', 'R', 'R', 'T', 'E', 'K', '0', '1'};

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}

template <class T>
void fnv_value(std::uint64_t& h, const T& v) {
  fnv(h, &v, sizeof(T));
}

template <class F>
void for_each_block(MomentKernel& K, F&& fn) {
  for (auto& a : K.W)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& d : c) fn(d.data(), static_cast<std::size_t>(d.size()), d.rows(), d.cols(), false);
  for (auto& b : K.bE) fn(b.data(), static_cast<std::size_t>(b.size()), b.rows(), b.cols(), true);
  for (auto& b : K.bS) fn(b.data(), static_cast<std::size_t>(b.size()), b.rows(), b.cols(), true);
}

}  // namespace

std::uint64_t kernel_key(const ColumnGrid& grid, const KernelSettings& settings, double kappa_bar) {
  std::uint64_t h = 14695981039346656037ull;
  fnv_value(h, std::uint32_t{1});
  const std::uint64_t n = grid.size();
  fnv_value(h, n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fnv_value(h, grid.z(i));
    fnv_value(h, grid.column_mass(i));
    fnv_value(h, grid.layer_of(i));
  }
  for (const auto& L : grid.layers()) fnv_value(h, L.n);
  fnv_value(h, static_cast<int>(settings.basis));
  fnv_value(h, static_cast<int>(settings.part));
  fnv_value(h, settings.formulation.source_path_jacobian);
  fnv_value(h, settings.formulation.literal_alpha_ratio);
  fnv_value(h, static_cast<std::uint64_t>(settings.mu_nodes));
  fnv_value(h, kappa_bar);
  return h;
}

// Stored row-major regardless of Eigen's column-major layout.
void save_kernel(const MomentKernel& K, const std::string& path, std::uint64_t key) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("kernel cache: cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t n = static_cast<std::uint64_t>(K.bE[0].rows());
  out.write(reinterpret_cast<const char*>(&key), sizeof key);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&K.kappa_bar), sizeof(double));
  auto& mk = const_cast<MomentKernel&>(K);
  for_each_block(mk, [&](double* d, std::size_t, Eigen::Index rows, Eigen::Index cols, bool) {
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) out.write(reinterpret_cast<const char*>(&d[c * rows + r]), sizeof(double));
  });
  if (!out) throw std::runtime_error("kernel cache: write failed for " + path);
}

bool load_kernel(MomentKernel& K, const std::string& path, std::uint64_t key, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint64_t file_key = 0, file_n = 0;
  double kb = 0.0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&file_key), sizeof file_key);
  in.read(reinterpret_cast<char*>(&file_n), sizeof file_n);
  in.read(reinterpret_cast<char*>(&kb), sizeof kb);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0 || file_key != key || file_n != n) return false;
  K.kappa_bar = kb;
  const auto N = static_cast<Eigen::Index>(n);
  for (auto& a : K.W)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& d : c) d.resize(N, N);
  for (auto& b : K.bE) b.resize(N, 2);
  for (auto& b : K.bS) b.resize(N, 2);
  bool ok = true;
  for_each_block(K, [&](double* d, std::size_t, Eigen::Index rows, Eigen::Index cols, bool) {
    for (Eigen::Index r = 0; r < rows && ok; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        in.read(reinterpret_cast<char*>(&d[c * rows + r]), sizeof(double));
        if (!in) {
          ok = false;
          break;
        }
      }
  });
  return ok;
}

// ---------------------------------------------------------------------------
// KernelBank

KernelBank::KernelBank(const ColumnGrid& grid, KernelSettings settings, std::vector<double> levels,
                       TabulationMode mode, std::string cache_dir, LevelInterpolation interpolation)
    : grid_(grid),
      settings_(settings),
      levels_(std::move(levels)),
      mode_(mode),
      resolved_(mode == TabulationMode::Exact ? TabulationMode::Exact : TabulationMode::Tabulated),
      cache_dir_(std::move(cache_dir)),
      interpolation_(interpolation) {
  if (levels_.size() < 2) throw std::invalid_argument("KernelBank: need at least two kappa-bar levels");
  if (!std::is_sorted(levels_.begin(), levels_.end())) throw std::invalid_argument("KernelBank: levels must increase");
  if (!cache_dir_.empty()) std::filesystem::create_directories(cache_dir_);
}

void KernelBank::prepare(const std::vector<double>& kappa_bars) {
  if (mode_ != TabulationMode::Auto) return;
  const std::set<double> distinct(kappa_bars.begin(), kappa_bars.end());
  resolved_ = distinct.size() <= 2 ? TabulationMode::Exact : TabulationMode::Tabulated;
}

std::string KernelBank::cache_path(double kappa_bar) const {
  std::ostringstream name;
  name << "kernel_" << std::hex << kernel_key(grid_, settings_, kappa_bar) << ".bin";
  return (std::filesystem::path(cache_dir_) / name.str()).string();
}

const MomentKernel& KernelBank::get(double kappa_bar) {
  auto it = built_.find(kappa_bar);
  if (it != built_.end()) return *it->second;
  auto K = std::make_unique<MomentKernel>();
  bool loaded = false;
  if (!cache_dir_.empty()) {
    loaded = load_kernel(*K, cache_path(kappa_bar), kernel_key(grid_, settings_, kappa_bar), grid_.size());
    if (loaded) ++cache_hits_;
  }
  if (!loaded) {
    *K = build_moment_kernel(grid_, kappa_bar, settings_);
    if (!cache_dir_.empty()) save_kernel(*K, cache_path(kappa_bar), kernel_key(grid_, settings_, kappa_bar));
  }
  return *built_.emplace(kappa_bar, std::move(K)).first->second;
}

const MomentKernel& KernelBank::kernel_at_level(std::size_t level) { return get(levels_.at(level)); }
const MomentKernel& KernelBank::kernel_exact(double kappa_bar) { return get(kappa_bar); }

Eigen::MatrixX4d KernelBank::moments(double kappa_bar, const Eigen::MatrixX4d& sources, double boundary_E,
                                     double boundary_S) {
  if (resolved_ == TabulationMode::Exact) return apply_kernel(get(kappa_bar), sources, boundary_E, boundary_S);
  const auto st = level_stencil(levels_, kappa_bar, interpolation_);
  Eigen::MatrixX4d out = st.weight[0] * apply_kernel(get(levels_[st.index[0]]), sources, boundary_E, boundary_S);
  for (std::size_t a = 1; a < st.size; ++a)
    out += st.weight[a] * apply_kernel(get(levels_[st.index[a]]), sources, boundary_E, boundary_S);
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise kernels

double column_mass_at(const DensityProfile& rho, double z) {
  double mass = 0.0, lo = 0.0;
  for (std::size_t i = 0; i < rho.breaks.size() && rho.breaks[i] < z; ++i) {
    mass += rho.values[i] * (rho.breaks[i] - lo);
    lo = rho.breaks[i];
  }
  return mass + rho.at(0.5 * (lo + z)) * (z - lo);
}

namespace {

struct PointGeometry {
  std::size_t layer_z, layer_zp;
  double ratio;  // n at z over n on the far side
  double mz, mzp, my, m0, mZ;
};

PointGeometry point_geometry(double z, double zp, const OpticalMedium& medium) {
  const auto& p = medium.profile();
  if (z == p.Y || zp == p.Y) throw std::invalid_argument("pointwise kernels: z and z' must differ from Y");
  PointGeometry g{};
  g.layer_z = z < p.Y ? 0 : 1;
  g.layer_zp = zp < p.Y ? 0 : 1;
  g.ratio = g.layer_z == 0 ? p.ratio_lower_upper() : p.ratio_upper_lower();
  const auto& rho = medium.density();
  g.mz = column_mass_at(rho, z);
  g.mzp = column_mass_at(rho, zp);
  g.my = column_mass_at(rho, p.Y);
  g.m0 = 0.0;
  g.mZ = column_mass_at(rho, p.Z);
  return g;
}

}  // namespace

double psi_kernel(int k, int c, double z, double zp, const OpticalMedium& medium, double kb,
                  const KernelSettings& settings) {
  const auto g = point_geometry(z, zp, medium);
  const auto& f = settings.formulation;
  double sum = 0.0;
  for (const auto& node : angular_rule(g.ratio, settings.mu_nodes)) {
    const double m = node.mu;
    if (g.layer_z == g.layer_zp) {
      sum += node.weight * ipow(m, k + c) * path_factor(m, f) * std::exp(-kb * std::abs(g.mz - g.mzp) / m);
    } else if (node.far_mu && *node.far_mu > 0.0) {
      const double e = *node.far_mu;
      sum += node.weight * ipow(m, k) * ipow(e, c) * path_factor(e, f) *
             std::exp(-kb * (std::abs(g.mz - g.my) / m + std::abs(g.mzp - g.my) / e));
    }
  }
  return 0.5 * sum;
}

Mat2 kernel_Z(int k, int c, double z, double zp, const OpticalMedium& medium, double kb,
              const KernelSettings& settings) {
  const auto g = point_geometry(z, zp, medium);
  const auto& f = settings.formulation;
  Mat2 sum = Mat2::Zero();
  for (const auto& node : angular_rule(g.ratio, settings.mu_nodes)) {
    const double m = node.mu;
    const bool real = node.far_mu && *node.far_mu > 0.0;
    const auto tp = transfer(g.ratio, m, real, KernelPart::Interface, settings.basis);
    const double gz = std::exp(-kb * std::abs(g.mz - g.my) / m);
    if (g.layer_z == g.layer_zp) {
      sum += node.weight * ipow(m, k) * gz * ipow(m, c) * path_factor(m, f) *
             std::exp(-kb * std::abs(g.mzp - g.my) / m) * tp.R;
    } else if (real) {
      const double e = *node.far_mu;
      sum += node.weight * ipow(m, k) * gz * ipow(e, c) * path_factor(e, f) *
             std::exp(-kb * std::abs(g.mzp - g.my) / e) * tp.T;
    }
  }
  return 0.5 * sum;
}

AlphaFactors alpha_factors(int k, double z, const OpticalMedium& medium, double kb, const KernelSettings& settings) {
  const auto g = point_geometry(z, z, medium);
  const Vec2 bvec = boundary_vector(settings.basis);
  const bool literal = settings.formulation.literal_alpha_ratio && g.layer_z == 1;
  const double own_b = g.layer_z == 0 ? g.m0 : g.mZ;
  const double far_b = g.layer_z == 0 ? g.mZ : g.m0;
  Vec2 own = Vec2::Zero(), far = Vec2::Zero();
  for (const auto& node : angular_rule(g.ratio, settings.mu_nodes)) {
    const double m = node.mu;
    const bool real = node.far_mu && *node.far_mu > 0.0;
    const auto ops = interface_operators(g.ratio, m, settings.basis);
    const double w = 0.5 * node.weight * ipow(m, k) * std::exp(-kb * std::abs(g.mz - g.my) / m);
    own += w * ops.X * bvec * m * std::exp(-kb * std::abs(g.my - own_b) / m);
    if (real) {
      const double e = *node.far_mu;
      far += w * far_boundary(ops.Y, true, e, g.ratio, literal, KernelPart::Interface, bvec) *
             std::exp(-kb * std::abs(g.my - far_b) / e);
    }
  }
  return g.layer_z == 0 ? AlphaFactors{own, far} : AlphaFactors{far, own};
}

Vec2 alpha_boundary(int k, double z, const OpticalMedium& medium, double kb, const KernelSettings& settings,
                    double boundary_E, double boundary_S) {
  const auto a = alpha_factors(k, z, medium, kb, settings);
  return a.E * boundary_E + a.S * boundary_S;
}

}  // namespace vrrte
