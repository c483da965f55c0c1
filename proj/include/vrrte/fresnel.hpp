#pragma once

#include <optional>

#include <Eigen/Core>

namespace vrrte {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;

/// Polarization basis of the two-component transport: (I, Q) or (I_l, I_r).
enum class Basis { IQ, LR };

struct Refraction {
  std::optional<double> eta;  // empty when the refracted wave is evanescent
  double mu_c = 0.0;          // critical cosine, 0 for n <= 1
};

/// mu_c(n) = sqrt(1 - 1/n^2) for n > 1, else 0.
double critical_cosine(double n);

/// eta(n, mu) = sqrt(1 - n^2 (1 - mu^2)) when the radicand is non-negative.
Refraction refract(double n, double mu);

/// Reflection (G), transmission (D) and total-reflection (Gamma) matrices.
/// G and D need a real refracted cosine; Gamma needs n >= 1 and mu <= mu_c.
Mat4 fresnel_G(double n, double mu);
Mat4 fresnel_D(double n, double mu);
Mat4 fresnel_Gamma(double n, double mu);

struct InterfaceMatrices4 {
  Mat4 X;
  Mat4 Y;
};

struct InterfaceMatrices2 {
  Mat2 X;
  Mat2 Y;
};

/// Reflection X and transmission Y for light hitting the interface with
/// cosine mu from the side whose index is n times that of the other side.
/// H = 1 at mu = mu_c.
InterfaceMatrices4 interface_operators(double n, double mu);

/// Reduction of the 4x4 operators to the (I, Q) block or the diagonal
/// (I_l, I_r) form.
InterfaceMatrices2 reduce(const InterfaceMatrices4& full, Basis basis);
InterfaceMatrices2 interface_operators(double n, double mu, Basis basis);

}  // namespace vrrte
