#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>

#include "vrrte/oracle.hpp"

using namespace vrrte;

namespace {
const BoundaryData kEarth{2.5, 300.0 / 4798.0, 0.0, 0.0};

struct Setup {
  OpticalMedium medium;
  ColumnModel model;
  Setup(double eps, double beta, AlbedoParams a = AlbedoParams{})
      : medium(RefractiveProfile::step(eps), AbsorptionTable::constant(0.5), DensityProfile::uniform(), a, beta),
        model(medium, ColumnGrid::build(medium, 60), FrequencyGrid::single(1.0)) {}
};

SourceField frozen_sources(const ColumnModel& model, KernelBank& bank, Basis basis) {
  TemperatureField T(static_cast<Eigen::Index>(model.nodes()));
  for (Eigen::Index i = 0; i < T.size(); ++i) T(i) = (300.0 - 60.0 * model.grid().z(static_cast<std::size_t>(i))) / 4798.0;
  MomentField M = MomentField::isotropic(model, T);
  for (int it = 0; it < 2; ++it) M = moment_update(build_sources(M, T, model, basis), bank, model, kEarth);
  return build_sources(M, T, model, basis);
}

double max_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return ((a - b).cwiseAbs().array() / b.cwiseAbs().array()).maxCoeff();
}
}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("ordinate sets") {
    const auto o = OrdinateSet::gauss(16);
    CHECK(o.total_weight() == doctest::Approx(2.0).epsilon(1e-14));
    const auto s = OrdinateSet::gauss(16, 0.6);
    CHECK(s.total_weight() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::find(s.mu.begin(), s.mu.end(), 0.6) != s.mu.end());
    std::vector<double> v(s.mu.begin(), s.mu.end());
    CHECK(s.interpolate(v, 0.37) == doctest::Approx(0.37));
  }

  TEST_CASE("analytic pure absorption") {
    const double nu = 1.0, z = 0.3;
    CHECK(analytic_absorption(z, 0.5, 0.5, 1.0, kEarth, nu) ==
          doctest::Approx(0.5 * kEarth.bottom(nu) * std::exp(-0.3)));
    CHECK(analytic_absorption(z, -0.5, 0.5, 1.0, kEarth, nu) == 0.0);
  }

  TEST_CASE("sweep reproduces pure absorption of the bottom inflow") {
    Setup s(0.0, 1.0, AlbedoParams::none());
    const auto N = static_cast<Eigen::Index>(s.model.nodes());
    SourceField S;
    S.s0 = S.s2 = S.s0p = S.s2p = S.H = Eigen::MatrixXd::Zero(N, 1);
    const auto M = sweep_reference(s.model, S, kEarth);
    for (Eigen::Index i = 0; i < N; ++i) {
      const double z = s.model.grid().z(static_cast<std::size_t>(i));
      CHECK(M.J0(i, 0) == doctest::Approx(0.5 * kEarth.bottom(1.0) * boost::math::expint(3, 0.5 * z)).epsilon(1e-6));
    }
  }

  TEST_CASE("kernel moments agree with the sweep") {
    for (double eps : {0.0, -0.01, -0.3})
      for (double beta : {0.0, 1.0}) {
        CAPTURE(eps);
        CAPTURE(beta);
        Setup s(eps, beta);
        KernelBank bank(s.model.grid(), KernelSettings{}, kappa_levels(), TabulationMode::Exact);
        const auto S = frozen_sources(s.model, bank, Basis::IQ);
        const auto A = moment_update(S, bank, s.model, kEarth);
        const auto B = sweep_reference(s.model, S, kEarth);
        CHECK(max_rel(A.J0, B.J0) < 1e-4);
        CHECK(max_rel(A.J2, B.J2) < 1e-4);
      }
  }

  TEST_CASE("continuity sweep matches the direct kernel") {
    Setup s(-0.3, 1.0);
    KernelSettings ks;
    ks.part = KernelPart::Direct;
    KernelBank bank(s.model.grid(), ks, kappa_levels(), TabulationMode::Exact);
    const auto S = frozen_sources(s.model, bank, Basis::IQ);
    OracleOptions o;
    o.fresnel = false;
    const auto A = moment_update(S, bank, s.model, kEarth);
    const auto B = sweep_reference(s.model, S, kEarth, o);
    CHECK(max_rel(A.J0, B.J0) < 1e-4);
  }
}
