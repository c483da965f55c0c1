#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vrrte/quadrature.hpp"
#include "vrrte/spectral.hpp"

using namespace vrrte;

namespace {
double blackbody_integral(const FrequencyGrid& g, double T) {
  std::vector<double> v;
  for (double nu : g.nodes()) v.push_back(planck(nu, T));
  return spectral_integral(v, g);
}
}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto r = gauss_legendre(5, -1.0, 2.0);
    std::vector<double> v;
    for (double x : r.nodes) v.push_back(x * x * x * x * x * x * x * x * x);  // degree 9
    CHECK(r.integrate(v) == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-14));
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }

  TEST_CASE("frequency grid weights are positive and sum to the range") {
    const auto g = FrequencyGrid::log_panels();
    CHECK(g.size() == 120);
    double sum = 0.0;
    for (double w : g.weights()) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(19.99).epsilon(1e-13));
  }

  TEST_CASE("planck at 300 K and nu = 1") {
    CHECK(planck(1.0, 300.0 / 4798.0) == doctest::Approx(1.13287928399768300e-7).epsilon(1e-13));
    CHECK(planck(1.0, 0.0) == 0.0);
    CHECK(planck(50.0, 0.01) == 0.0);
  }

  TEST_CASE("planck derivative matches a central difference") {
    const double T = 0.07, h = 1e-6;
    for (double nu : {0.1, 1.0, 5.0})
      CHECK(planck_dT(nu, T) == doctest::Approx((planck(nu, T + h) - planck(nu, T - h)) / (2 * h)).epsilon(1e-7));
  }

  TEST_CASE("blackbody integrals over (0.01, 20)") {
    const auto g = FrequencyGrid::log_panels();
    CHECK(blackbody_integral(g, 5700.0 / 4798.0) == doctest::Approx(12.9344498648603638).epsilon(1e-8));
    CHECK(blackbody_integral(g, 300.0 / 4798.0) == doctest::Approx(9.92353544522119e-5).epsilon(1e-8));
  }

  TEST_CASE("default panel count is stable under doubling") {
    const auto g1 = FrequencyGrid::log_panels(0.01, 20.0, 40, 3);
    const auto g2 = FrequencyGrid::log_panels(0.01, 20.0, 80, 3);
    for (double T : {0.04, 0.0625, 0.1, 1.188}) {
      const double a = blackbody_integral(g1, T), b = blackbody_integral(g2, T);
      CHECK(std::abs(a / b - 1.0) < 1e-6);
    }
  }

  TEST_CASE("temperature conversions") {
    const auto t = RescaledTemperature::from_celsius(180.0);
    CHECK(t.kelvin() == doctest::Approx(453.15));
    CHECK(t.value() == doctest::Approx(453.15 / 4798.0));
    CHECK_THROWS(RescaledTemperature(-1.0));
  }

  TEST_CASE("inversion round trip for random temperatures and opacities") {
    const auto g = FrequencyGrid::log_panels();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uT(1e-3, 2.0), uk(0.01, 1.2);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> ka(g.size());
      for (auto& k : ka) k = uk(rng);
      const double T0 = uT(rng);
      double R = 0.0;
      for (std::size_t q = 0; q < g.size(); ++q) R += g.weights()[q] * ka[q] * planck(g.nodes()[q], T0);
      const double T = invert_planck_mean(R, ka, g).value();
      double back = 0.0;
      for (std::size_t q = 0; q < g.size(); ++q) back += g.weights()[q] * ka[q] * planck(g.nodes()[q], T);
      CHECK(std::abs(back - R) <= 1e-10 * R);
      CHECK(T == doctest::Approx(T0).epsilon(1e-9));
    }
  }

  TEST_CASE("inversion edge cases") {
    const auto g = FrequencyGrid::log_panels();
    std::vector<double> ka(g.size(), 0.5);
    CHECK(invert_planck_mean(0.0, ka, g).value() == 0.0);
    CHECK_THROWS(invert_planck_mean(-1.0, ka, g));
    std::vector<double> zero(g.size(), 0.0);
    CHECK_THROWS(invert_planck_mean(1.0, zero, g));
  }
}
