#pragma once

#include <array>

namespace mlswe {

/// Additive Runge-Kutta pair: explicit coefficients for advection and mass
/// transfer, a diagonally implicit set (TR-BDF2) for surface gradients and
/// vertical viscosity. Both share the weights b and nodes c.
struct ButcherTableaux {
  std::array<std::array<double, 3>, 3> a_explicit{};
  std::array<std::array<double, 3>, 3> a_implicit{};
  std::array<double, 3> b{};
  std::array<double, 3> c{};
};

/// Second order IMEX pair with gamma = 2 - sqrt(2):
///   implicit part: trapezoidal stage to c2 = gamma, then BDF2 (L-stable),
///   a22 = a33 = 1 - 1/sqrt(2), b = (1/(2 sqrt 2), 1/(2 sqrt 2), 1 - 1/sqrt 2).
const ButcherTableaux& ark2_tableaux();

}  // namespace mlswe
