#include "vrrte/fresnel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vrrte {

namespace {

void check_args(double n, double mu) {
  if (!(n > 0.0)) throw std::invalid_argument("fresnel: index ratio must be positive");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("fresnel: cosine must lie in (0, 1]");
}

// Rounding at mu = mu_c can push the radicand just below zero.
double real_eta(double n, double mu) {
  if (n == 1.0) return mu;
  const double rad = 1.0 - n * n * (1.0 - mu * mu);
  if (rad < -1e-13) throw std::domain_error("fresnel: refracted wave is evanescent");
  return std::sqrt(std::max(rad, 0.0));
}

}  // namespace

double critical_cosine(double n) { return n > 1.0 ? std::sqrt(1.0 - 1.0 / (n * n)) : 0.0; }

Refraction refract(double n, double mu) {
  Refraction r;
  r.mu_c = critical_cosine(n);
  if (n == 1.0) {
    r.eta = mu;
    return r;
  }
  const double rad = 1.0 - n * n * (1.0 - mu * mu);
  if (rad >= 0.0) r.eta = std::sqrt(rad);
  return r;
}

Mat4 fresnel_G(double n, double mu) {
  check_args(n, mu);
  const double eta = real_eta(n, mu);
  const double rs = (mu - n * eta) / (mu + n * eta);
  const double rp = (n * mu - eta) / (n * mu + eta);
  Mat4 G = Mat4::Zero();
  G(0, 0) = G(1, 1) = 0.5 * (rs * rs + rp * rp);
  G(0, 1) = G(1, 0) = 0.5 * (rs * rs - rp * rp);
  G(2, 2) = G(3, 3) = rs * rp;
  return G;
}

Mat4 fresnel_D(double n, double mu) {
  check_args(n, mu);
  const double eta = real_eta(n, mu);
  const double a = mu + n * eta;
  const double b = n * mu + eta;
  const double c = 2.0 * n * mu * eta;
  Mat4 D = Mat4::Zero();
  D(0, 0) = D(1, 1) = c * (1.0 / (a * a) + 1.0 / (b * b));
  D(0, 1) = D(1, 0) = c * (1.0 / (a * a) - 1.0 / (b * b));
  D(2, 2) = D(3, 3) = 2.0 * c / (a * b);
  return D;
}

Mat4 fresnel_Gamma(double n, double mu) {
  check_args(n, mu);
  const double mu_c = critical_cosine(n);
  if (n < 1.0 || mu > mu_c) throw std::domain_error("fresnel: Gamma is only defined under total reflection");
  const double s2 = 1.0 - mu * mu;
  const double den = 1.0 - (1.0 + 1.0 / (n * n)) * mu * mu;
  Mat4 Gm = Mat4::Zero();
  Gm(0, 0) = Gm(1, 1) = 1.0;
  Gm(2, 2) = Gm(3, 3) = 1.0 - 2.0 * s2 * s2 / den;
  Gm(3, 2) = 2.0 * mu * s2 * std::sqrt(std::max(0.0, mu_c * mu_c - mu * mu)) / den;
  Gm(2, 3) = -Gm(3, 2);
  return Gm;
}

InterfaceMatrices4 interface_operators(double n, double mu) {
  check_args(n, mu);
  if (n == 1.0) return {Mat4::Zero(), Mat4::Identity()};
  if (n < 1.0) return {fresnel_G(n, mu), fresnel_D(n, mu)};
  if (mu >= critical_cosine(n)) return {fresnel_G(n, mu), fresnel_D(n, mu)};
  return {fresnel_Gamma(n, mu), Mat4::Zero()};
}

InterfaceMatrices2 reduce(const InterfaceMatrices4& full, Basis basis) {
  if (basis == Basis::IQ) return {full.X.topLeftCorner<2, 2>(), full.Y.topLeftCorner<2, 2>()};
  auto diag = [](const Mat4& M) {
    Mat2 d = Mat2::Zero();
    d(0, 0) = M(0, 0) + M(0, 1);
    d(1, 1) = M(0, 0) - M(0, 1);
    return d;
  };
  return {diag(full.X), diag(full.Y)};
}

InterfaceMatrices2 interface_operators(double n, double mu, Basis basis) {
  return reduce(interface_operators(n, mu), basis);
}

}  // namespace vrrte
