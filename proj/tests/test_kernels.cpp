#include <doctest.h>

#include <cmath>
#include <filesystem>

#include <boost/math/special_functions/expint.hpp>

#include "vrrte/kernels.hpp"

using namespace vrrte;

namespace {
double En(int n, double x) { return boost::math::expint(n, x); }

OpticalMedium absorbing(double eps, double kappa = 0.5) {
  return OpticalMedium(RefractiveProfile::step(eps), AbsorptionTable::constant(kappa), DensityProfile::uniform(),
                       AlbedoParams::none(), 1.0);
}

Eigen::MatrixX4d isotropic_source(std::size_t n, double S) {
  Eigen::MatrixX4d s = Eigen::MatrixX4d::Zero(static_cast<Eigen::Index>(n), 4);
  s.col(0).setConstant(S);
  return s;
}
}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("constant source in a uniform slab") {
    const auto m = absorbing(0.0);
    const auto g = ColumnGrid::build(m, 100);
    const double kappa = 0.5, S = 0.3;
    const auto K = build_moment_kernel(g, kappa, KernelSettings{});
    const Eigen::MatrixX4d M = apply_kernel(K, isotropic_source(g.size(), S), 0.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double z = g.z(i);
      const double J0 = 0.5 * (S / kappa) * (2.0 - En(2, kappa * z) - En(2, kappa * (1.0 - z)));
      CHECK(M(static_cast<Eigen::Index>(i), 0) == doctest::Approx(J0).epsilon(1e-5));
      CHECK(M(static_cast<Eigen::Index>(i), 1) == doctest::Approx(0.0));
    }
  }

  TEST_CASE("bottom inflow decays as E3") {
    const auto m = absorbing(0.0);
    const auto g = ColumnGrid::build(m, 50);
    const auto K = build_moment_kernel(g, 0.5, KernelSettings{});
    const Eigen::MatrixX4d M = apply_kernel(K, isotropic_source(g.size(), 0.0), 2.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double z = g.z(i);
      CHECK(M(static_cast<Eigen::Index>(i), 0) == doctest::Approx(0.5 * 2.0 * En(3, 0.5 * z)).epsilon(1e-7));
      CHECK(M(static_cast<Eigen::Index>(i), 2) == doctest::Approx(0.5 * 2.0 * En(5, 0.5 * z)).epsilon(1e-7));
    }
  }

  TEST_CASE("interface part vanishes for matched indices") {
    const auto m = absorbing(0.0);
    const auto g = ColumnGrid::build(m, 40);
    KernelSettings s;
    s.part = KernelPart::Interface;
    const auto K = build_moment_kernel(g, 0.5, s);
    for (const auto& a : K.W)
      for (const auto& b : a)
        for (const auto& c : b)
          for (const auto& W : c) CHECK(W.cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < 2; ++k) {
      CHECK(K.bE[k].cwiseAbs().maxCoeff() < 1e-12);
      CHECK(K.bS[k].cwiseAbs().maxCoeff() < 1e-12);
    }
    for (double z : {0.2, 0.7})
      for (double zp : {0.1, 0.6, 0.9}) {
        CHECK(kernel_Z(0, 0, z, zp, m, 0.5, s).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(kernel_Z(2, 2, z, zp, m, 0.5, s).cwiseAbs().maxCoeff() < 1e-12);
      }
    CHECK(alpha_factors(0, 0.8, m, 0.5, s).E.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(alpha_factors(2, 0.2, m, 0.5, s).S.cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS(kernel_Z(0, 0, 0.5, 0.2, m, 0.5, s));
  }

  TEST_CASE("literal alpha ratio does not vanish for matched indices") {
    const auto m = absorbing(0.0);
    KernelSettings s;
    s.part = KernelPart::Interface;
    s.formulation.literal_alpha_ratio = true;
    CHECK(alpha_factors(0, 0.8, m, 0.5, s).E.cwiseAbs().maxCoeff() > 1e-3);
    s.formulation.literal_alpha_ratio = false;
    CHECK(alpha_factors(0, 0.8, m, 0.5, s).E.cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("combined kernels are non-negative where the transport is") {
    const auto m = absorbing(-0.3);
    const auto g = ColumnGrid::build(m, 30);
    KernelSettings s;
    s.basis = Basis::LR;
    const auto L = build_moment_kernel(g, 0.5, s);
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r)
          for (int q = 0; q < 2; ++q) CHECK(L.W[k][c][r][q].minCoeff() >= -1e-15);
    s.basis = Basis::IQ;
    const auto I = build_moment_kernel(g, 0.5, s);
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < 2; ++c) {
        CHECK(I.W[k][c][0][0].minCoeff() >= -1e-15);
        CHECK(I.W[k][c][1][1].minCoeff() >= -1e-15);
      }
  }

  TEST_CASE("combined kernel is direct plus interface") {
    const auto m = absorbing(-0.3);
    const auto g = ColumnGrid::build(m, 30);
    KernelSettings s;
    s.part = KernelPart::Direct;
    const auto D = build_moment_kernel(g, 0.4, s);
    s.part = KernelPart::Interface;
    const auto I = build_moment_kernel(g, 0.4, s);
    s.part = KernelPart::Combined;
    const auto C = build_moment_kernel(g, 0.4, s);
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r)
          for (int q = 0; q < 2; ++q) CHECK((C.W[k][c][r][q] - D.W[k][c][r][q] - I.W[k][c][r][q]).norm() < 1e-12);
    for (int k = 0; k < 2; ++k) CHECK((C.bE[k] - D.bE[k] - I.bE[k]).norm() < 1e-12);
  }

  TEST_CASE("pointwise source kernel without jacobian is the E-function") {
    const auto m = absorbing(0.0);
    KernelSettings s;
    s.formulation.source_path_jacobian = false;
    const double z = 0.3, zp = 0.7;
    // 1/2 int_0^1 exp(-k dz / mu) dmu
    CHECK(psi_kernel(0, 0, z, zp, m, 0.5, s) == doctest::Approx(0.5 * En(2, 0.2)).epsilon(1e-8));
    s.formulation.source_path_jacobian = true;
    CHECK(psi_kernel(0, 0, z, zp, m, 0.5, s) == doctest::Approx(0.5 * En(1, 0.2)).epsilon(1e-6));
  }

  TEST_CASE("tabulated moments match exact kernels off the levels") {
    const auto m = absorbing(-0.01);
    const auto g = ColumnGrid::build(m, 60);
    KernelBank tab(g, KernelSettings{}, kappa_levels(), TabulationMode::Tabulated);
    KernelBank ex(g, KernelSettings{}, kappa_levels(), TabulationMode::Exact);
    Eigen::MatrixX4d S = Eigen::MatrixX4d::Zero(static_cast<Eigen::Index>(g.size()), 4);
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
      S(i, 0) = 0.02 + 0.01 * std::sin(3.0 * g.z(static_cast<std::size_t>(i)));
      S(i, 2) = 0.003;
      S(i, 3) = -0.003;
    }
    for (double kb : {0.033, 0.41, 0.977}) {
      const auto a = tab.moments(kb, S, 0.01, 0.0);
      const auto b = ex.moments(kb, S, 0.01, 0.0);
      CHECK(((a.col(0) - b.col(0)).cwiseAbs().array() / b.col(0).cwiseAbs().array()).maxCoeff() < 1e-4);
      CHECK(((a.col(2) - b.col(2)).cwiseAbs().array() / b.col(2).cwiseAbs().array()).maxCoeff() < 1e-4);
    }
    CHECK(tab.tabulated());
    CHECK(tab.built_count() <= 12);
    KernelBank lin(g, KernelSettings{}, kappa_levels(60, kKappaBarMin, kKappaBarMax, LevelSpacing::Uniform),
                   TabulationMode::Tabulated, {}, LevelInterpolation::Linear);
    const auto c = lin.moments(0.033, S, 0.01, 0.0), d = ex.moments(0.033, S, 0.01, 0.0);
    CHECK(((c.col(0) - d.col(0)).cwiseAbs().array() / d.col(0).cwiseAbs().array()).maxCoeff() > 1e-4);
  }

  TEST_CASE("auto mode picks exact kernels for gray runs") {
    const auto m = absorbing(-0.01);
    const auto g = ColumnGrid::build(m, 20);
    KernelBank bank(g, KernelSettings{}, kappa_levels(), TabulationMode::Auto);
    bank.prepare({0.5, 0.5, 0.5});
    CHECK_FALSE(bank.tabulated());
    KernelBank many(g, KernelSettings{}, kappa_levels(), TabulationMode::Auto);
    many.prepare({0.1, 0.2, 0.3});
    CHECK(many.tabulated());
  }

  TEST_CASE("kernel cache round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "vrrte_kernel_cache_test";
    std::filesystem::remove_all(dir);
    const auto m = absorbing(-0.3);
    const auto g = ColumnGrid::build(m, 20);
    const Eigen::MatrixX4d S = isotropic_source(g.size(), 0.1);
    Eigen::MatrixX4d first, second;
    {
      KernelBank bank(g, KernelSettings{}, kappa_levels(), TabulationMode::Exact, dir.string());
      first = bank.moments(0.5, S, 1.0, 0.5);
      CHECK(bank.cache_hits() == 0);
    }
    {
      KernelBank bank(g, KernelSettings{}, kappa_levels(), TabulationMode::Exact, dir.string());
      second = bank.moments(0.5, S, 1.0, 0.5);
      CHECK(bank.cache_hits() == 1);
    }
    CHECK(first == second);
    KernelSettings other;
    other.basis = Basis::LR;
    CHECK(kernel_key(g, other, 0.5) != kernel_key(g, KernelSettings{}, 0.5));
    MomentKernel K;
    CHECK_FALSE(load_kernel(K, (dir / "missing.bin").string(), 1, g.size()));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("LR kernels are a change of basis of IQ kernels") {
    const auto m = absorbing(-0.3);
    const auto g = ColumnGrid::build(m, 30);
    KernelSettings iq, lr;
    lr.basis = Basis::LR;
    KernelBank a(g, iq, kappa_levels(), TabulationMode::Exact), b(g, lr, kappa_levels(), TabulationMode::Exact);
    Eigen::MatrixX4d S(static_cast<Eigen::Index>(g.size()), 4);
    for (Eigen::Index i = 0; i < S.rows(); ++i) S.row(i) << 0.05 + 0.01 * i, -0.01, 0.02, 0.015;
    // I_l = (I + Q)/2, I_r = (I - Q)/2 componentwise in each mu power
    Eigen::MatrixX4d SL(S.rows(), 4);
    SL.col(0) = 0.5 * (S.col(0) + S.col(1));
    SL.col(1) = 0.5 * (S.col(0) - S.col(1));
    SL.col(2) = 0.5 * (S.col(2) + S.col(3));
    SL.col(3) = 0.5 * (S.col(2) - S.col(3));
    const auto M = a.moments(0.5, S, 1.0, 0.3);
    const auto ML = b.moments(0.5, SL, 1.0, 0.3);
    CHECK((0.5 * (M.col(0) + M.col(1)) - ML.col(0)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((0.5 * (M.col(0) - M.col(1)) - ML.col(1)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((0.5 * (M.col(2) - M.col(3)) - ML.col(3)).cwiseAbs().maxCoeff() < 1e-13);
  }
}
