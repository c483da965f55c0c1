#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "vrrte/fresnel.hpp"

using namespace vrrte;

TEST_SUITE("fresnel") {
  TEST_CASE("critical cosine and refraction") {
    CHECK(critical_cosine(0.7) == 0.0);
    CHECK(critical_cosine(1.5) == doctest::Approx(std::sqrt(1.0 - 1.0 / 2.25)));
    const auto r = refract(1.5, 0.8);
    REQUIRE(r.eta.has_value());
    CHECK(*r.eta == doctest::Approx(std::sqrt(1.0 - 2.25 * 0.36)));
    CHECK_FALSE(refract(1.5, 0.5).eta.has_value());
    CHECK(*refract(0.7, 0.0).eta == doctest::Approx(std::sqrt(1.0 - 0.49)));
  }

  TEST_CASE("reference values at n = 1.5, mu = 0.8") {
    const Mat4 G = fresnel_G(1.5, 0.8), D = fresnel_D(1.5, 0.8);
    CHECK(G(0, 0) == doctest::Approx(0.114141100221353938).epsilon(1e-13));
    CHECK(G(0, 1) == doctest::Approx(-0.104033278385863350).epsilon(1e-13));
    CHECK(D(0, 0) == doctest::Approx(0.885858899778646062).epsilon(1e-13));
    CHECK(D(0, 1) == doctest::Approx(0.104033278385863350).epsilon(1e-13));
    CHECK(G(2, 2) == doctest::Approx(0.0469602784066557827).epsilon(1e-13));
    CHECK(D(2, 2) == doctest::Approx(0.879728973778471585).epsilon(1e-13));
  }

  TEST_CASE("total reflection matrix at n = 2, mu = 0.5") {
    const Mat4 Gm = fresnel_Gamma(2.0, 0.5);
    CHECK(Gm(2, 2) == doctest::Approx(-0.63636).epsilon(1e-4));
    CHECK(Gm(3, 2) == doctest::Approx(0.77139).epsilon(1e-4));
    CHECK(Gm(2, 2) * Gm(2, 2) + Gm(3, 2) * Gm(3, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Gm(0, 0) == 1.0);
    CHECK(Gm(1, 1) == 1.0);
    CHECK(Gm(0, 1) == 0.0);
    CHECK_THROWS(fresnel_Gamma(2.0, 0.95));
    CHECK_THROWS(fresnel_Gamma(0.8, 0.5));
    CHECK_THROWS(fresnel_G(2.0, 0.5));
  }

  TEST_CASE("energy closure per polarization") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> un(0.5, 2.0), u01(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const double n = un(rng);
      const double mu = critical_cosine(n) + (1.0 - critical_cosine(n)) * u01(rng);
      if (mu <= critical_cosine(n)) continue;
      const Mat4 G = fresnel_G(n, mu), D = fresnel_D(n, mu);
      CHECK(std::abs(G(0, 0) + G(0, 1) + D(0, 0) + D(0, 1) - 1.0) < 1e-12);
      CHECK(std::abs(G(0, 0) - G(0, 1) + D(0, 0) - D(0, 1) - 1.0) < 1e-12);
    }
  }

  TEST_CASE("matched indices are transparent") {
    for (double mu : {0.05, 0.3, 1.0}) {
      const auto ops = interface_operators(1.0, mu);
      CHECK(ops.X == Mat4::Zero());
      CHECK(ops.Y == Mat4::Identity());
    }
  }

  TEST_CASE("total internal reflection selects Gamma and no transmission") {
    const auto ops = interface_operators(1.4, 0.3);
    CHECK(ops.Y == Mat4::Zero());
    CHECK(ops.X(0, 0) == 1.0);
    CHECK(ops.X(1, 1) == 1.0);
  }

  TEST_CASE("operators preserve unpolarized-linear subspace") {
    for (double n : {0.7, 1.3}) {
      const auto ops = interface_operators(n, 0.9);
      const Eigen::Vector4d v(0.8, -0.2, 0.0, 0.0);
      const Eigen::Vector4d x = ops.X * v, y = ops.Y * v;
      CHECK(x(2) == 0.0);
      CHECK(x(3) == 0.0);
      CHECK(y(2) == 0.0);
      CHECK(y(3) == 0.0);
    }
  }

  TEST_CASE("LR reduction is the diagonalised IQ block") {
    const auto full = interface_operators(1.3, 0.9);
    const auto iq = reduce(full, Basis::IQ), lr = reduce(full, Basis::LR);
    Mat2 P;  // (I, Q) -> (I_l, I_r)
    P << 0.5, 0.5, 0.5, -0.5;
    const Mat2 conj = P * iq.X * P.inverse();
    CHECK((conj - lr.X).norm() < 1e-14);
    CHECK((P * iq.Y * P.inverse() - lr.Y).norm() < 1e-14);
    CHECK(lr.X(0, 1) == 0.0);
  }

  TEST_CASE("eigenvalues of the reduced operators do not exceed one") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> un(0.5, 2.0), u01(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      const double n = un(rng), mu = u01(rng);
      const auto ops = interface_operators(n, mu, Basis::IQ);
      for (const Mat2& M : {ops.X, ops.Y}) {
        const auto ev = M.eigenvalues();
        for (int k = 0; k < 2; ++k) CHECK(std::abs(ev(k)) <= 1.0 + 1e-12);
      }
    }
  }
}
