#include <doctest.h>

#include <random>

#include "vrrte/solver.hpp"

using namespace vrrte;

namespace {
OpticalMedium medium(double eps, double beta = 1.0, AlbedoParams a = AlbedoParams{}) {
  return OpticalMedium(RefractiveProfile::step(eps), AbsorptionTable::constant(0.5), DensityProfile::uniform(), a,
                       beta);
}

const BoundaryData kEarth{2.5, 300.0 / 4798.0, 0.0, 0.0};

MomentField random_moments(const ColumnModel& model, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto M = MomentField::zeros(model.nodes(), model.bands());
  for (Eigen::Index i = 0; i < M.J0.rows(); ++i)
    for (Eigen::Index q = 0; q < M.J0.cols(); ++q) {
      M.J0(i, q) = 1.0 + u(rng);
      M.J2(i, q) = M.J0(i, q) * (0.2 + 0.2 * u(rng));
      M.K0(i, q) = 0.2 * (u(rng) - 0.5);
      M.K2(i, q) = 0.1 * (u(rng) - 0.5);
    }
  return M;
}
}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("boundary data") {
    CHECK(kEarth.bottom(1.0) == doctest::Approx(2.5 * planck(1.0, 300.0 / 4798.0)));
    CHECK(kEarth.top(1.0) == 0.0);
  }

  TEST_CASE("no scattering leaves only thermal emission") {
    const auto m = medium(0.0, 1.0, AlbedoParams::none());
    ColumnModel model(m, ColumnGrid::build(m, 10), FrequencyGrid::single(1.0));
    const TemperatureField T = TemperatureField::Constant(static_cast<Eigen::Index>(model.nodes()), 0.06);
    const auto S = build_sources(random_moments(model, 1), T, model, Basis::IQ);
    for (Eigen::Index i = 0; i < S.s0.rows(); ++i) {
      CHECK(S.s0(i, 0) == doctest::Approx(0.5 * planck(1.0, 0.06)));
      CHECK(S.s2(i, 0) == 0.0);
      CHECK(S.s0p(i, 0) == 0.0);
      CHECK(S.H(i, 0) == 0.0);
    }
  }

  TEST_CASE("IQ and LR sources are the same field") {
    const auto m = medium(-0.3, 0.8);
    ColumnModel model(m, ColumnGrid::build(m, 20), FrequencyGrid::log_panels(0.01, 20.0, 4, 3));
    TemperatureField T(static_cast<Eigen::Index>(model.nodes()));
    for (Eigen::Index i = 0; i < T.size(); ++i) T(i) = 0.05 + 0.01 * static_cast<double>(i) / T.size();
    const auto M = random_moments(model, 5);
    const auto A = build_sources(M, T, model, Basis::IQ);
    const auto B = build_sources(M, T, model, Basis::LR);
    CHECK((0.5 * (A.s0 + A.s0p) - B.s0).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((0.5 * (A.s2 + A.s2p) - B.s2).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((0.5 * (A.s0 - A.s0p) - B.s0p).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((0.5 * (A.s2 - A.s2p) - B.s2p).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(B.s2p.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("literal Q source differs only in the Q coefficients") {
    const auto m = medium(0.0, 1.0);
    ColumnModel model(m, ColumnGrid::build(m, 20), FrequencyGrid::single(1.0));
    const TemperatureField T = TemperatureField::Constant(static_cast<Eigen::Index>(model.nodes()), 0.06);
    const auto M = random_moments(model, 9);
    const auto A = build_sources(M, T, model, Basis::IQ, false);
    const auto B = build_sources(M, T, model, Basis::IQ, true);
    CHECK(A.s0 == B.s0);
    CHECK(A.s2 == B.s2);
    CHECK((A.s0p + A.H).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((B.s0p - A.H / 3.0).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((B.s2p + A.H).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("temperature update inverts isotropic moments") {
    const auto m = medium(-0.01);
    ColumnModel model(m, ColumnGrid::build(m, 10), FrequencyGrid::log_panels());
    TemperatureField T(static_cast<Eigen::Index>(model.nodes()));
    for (Eigen::Index i = 0; i < T.size(); ++i) T(i) = 0.04 + 0.003 * static_cast<double>(i);
    const auto M = MomentField::isotropic(model, T);
    CHECK((temperature_update(M, model) - T).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(equilibrium_residual(M, T, model) < 1e-13);
  }

  TEST_CASE("gray two-band inversion matches bisection") {
    const auto m = medium(0.0, 1.0, AlbedoParams::none());
    const std::vector<double> nodes{0.5, 2.0}, weights{1.0, 1.0};
    ColumnModel model(m, ColumnGrid::build(m, 4), FrequencyGrid(nodes, weights, 0.0, 2.5));
    auto M = MomentField::zeros(model.nodes(), 2);
    M.J0.col(0).setConstant(3e-3);
    M.J0.col(1).setConstant(1e-4);
    const double target = 0.5 * (3e-3 + 1e-4);
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * (planck(0.5, mid) + planck(2.0, mid)) < target ? lo : hi) = mid;
    }
    const auto T = temperature_update(M, model);
    CHECK(T(0) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
  }

  TEST_CASE("case 2 iteration is monotone, bounded and bracketed") {
    const auto m = medium(-0.01);
    ColumnModel model(m, ColumnGrid::build(m, 50), FrequencyGrid::log_panels(0.01, 20.0, 20, 3));
    KernelBank bank(model.grid(), KernelSettings{}, kappa_levels());
    const auto up = iterate_to_convergence(model, bank, kEarth, IterationMode::Increasing);
    const auto down = iterate_to_convergence(model, bank, kEarth, IterationMode::Decreasing);
    CHECK(up.converged);
    CHECK(down.converged);
    CHECK(up.monotone());
    CHECK(down.monotone());
    CHECK(up.moments_bounded());
    CHECK(down.moments_bounded());
    CHECK((up.T - down.T).cwiseAbs().maxCoeff() < 2e-4);
    CHECK(((down.T - up.T).array() >= -1e-12).all());
    CHECK(up.T_history.size() == static_cast<std::size_t>(up.iterations) + 1);
    CHECK(up.records.size() == static_cast<std::size_t>(up.iterations));
    CHECK(model.grid().z(up.probe_node) == doctest::Approx(0.03).epsilon(0.2));
  }

  TEST_CASE("iteration limit reports non-convergence") {
    const auto m = medium(-0.01);
    ColumnModel model(m, ColumnGrid::build(m, 20), FrequencyGrid::log_panels(0.01, 20.0, 10, 3));
    KernelBank bank(model.grid(), KernelSettings{}, kappa_levels());
    SolverOptions o;
    o.max_iterations = 2;
    const auto r = iterate_to_convergence(model, bank, kEarth, IterationMode::Increasing, o);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    o.tolerance = 0.0;
    CHECK_THROWS(iterate_to_convergence(model, bank, kEarth, IterationMode::Increasing, o));
  }

  TEST_CASE("matched indices reproduce the no-interface build") {
    const auto m = medium(0.0);
    const FrequencyGrid f = FrequencyGrid::log_panels(0.01, 20.0, 10, 3);
    ColumnModel a(m, ColumnGrid::build(m, 40, true), f), b(m, ColumnGrid::build(m, 40, false), f);
    KernelBank ka(a.grid(), KernelSettings{}, kappa_levels()), kb(b.grid(), KernelSettings{}, kappa_levels());
    const auto ra = iterate_to_convergence(a, ka, kEarth, IterationMode::Increasing);
    const auto rb = iterate_to_convergence(b, kb, kEarth, IterationMode::Increasing);
    CHECK((ra.T - rb.T).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(((ra.moments.J0 - rb.moments.J0).cwiseAbs().array() / rb.moments.J0.cwiseAbs().array()).maxCoeff() < 1e-10);
  }
}
